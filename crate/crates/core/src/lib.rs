//! Radar operating metrics and ISAC network throughput for a monostatic
//! radar whose resolution cell holds Poisson-distributed discrete clutter.
//!
//! The clutter CDF is obtained by inverting its characteristic function
//! ([`inversion`]), cross-checked against a direct series ([`clutter`]) and
//! a Monte Carlo simulator ([`monte_carlo`]).

pub mod clutter;
pub mod detection;
pub mod error;
pub mod inversion;
pub mod monte_carlo;
pub mod scenario;
pub mod throughput;

pub use clutter::{
    clutter_cdf_series, clutter_cf, clutter_mean, clutter_spec_from_scenario, CompoundClutterSpec,
};
pub use detection::{pd, pfa, threshold_for_pfa, Method, MetricResult, ThresholdSolution};
pub use error::{Error, Result};
pub use inversion::{
    cdf_from_cf, cdf_from_cf_detailed, CdfEvaluation, CfHandle, QuadratureOptions,
};
pub use monte_carlo::{
    estimate_pd_mc, estimate_pfa_mc, position_resolved_gap, McEstimate, McOptions, SamplingMode,
    TargetModel,
};
pub use scenario::{
    ClutterParams, IsacParams, RadarParams, Scenario, ScenarioParams, TargetParams,
};
pub use throughput::{network_throughput, sweep_duty_cycle, DutySweep, ThroughputPoint};
