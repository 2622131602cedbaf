//! Scenario presets and experiment drivers.

mod compare;
mod montecarlo;
mod scenario;

pub use compare::{run_interpolation_comparison, ComparisonSpec, InterpolationComparison};
pub use montecarlo::{
    quantile, run_monte_carlo, sweep_rstar, MonteCarloResult, MonteCarloSpec, RealizationSummary, SweepRow,
    DEFAULT_QUANTILES,
};
pub use scenario::{
    hexagon_configuration, scenario_counterexample_rstar1, scenario_hexagon, scenario_uniform, uniform_configuration,
    InitialCondition, ScenarioSpec, HEXAGON_MULTIPLICITIES, MAX_CONNECTED_ATTEMPTS,
};
