//! The four opinion dynamics and their time integration.
//!
//! Every agent moves toward its local average `x̄_i`. Bounded confidence
//! uses that velocity unchanged; the 1-D freeze rule zeroes it when the
//! agent's critical region is occupied; NOLB projects it onto the cone of
//! admissible velocities built from the behind graph; RNOLB does the same
//! with a relaxed behind graph drawn under a fresh random agent order.

mod interaction;
mod simulate;
mod step;

pub use crate::configuration::AgentConfiguration;
pub use interaction::{interaction_weights, local_average, InteractionFunction, WeightMatrix};
pub use simulate::{simulate, GuardKind, Integrator, Model, ModelParams, RecordSpec, RunStats, Trajectory};
pub use step::{
    critical_region_members, step_bounded_confidence, step_nolb, step_nolb_freeze, step_rnolb, velocities,
    StepSettings,
};
