//! Bounded-confidence opinion dynamics and two connectivity-preserving
//! controls ("no one left behind" and its relaxed variant), together with
//! the experiment harness used to study their convergence.
//!
//! Module map:
//! - [`geometry`]: cone projection with KKT certificates, hull and box predicates.
//! - [`dynamics`]: interaction weights, critical regions, the four steppers, `simulate`.
//! - [`graphs`]: interaction, behind and relaxed behind graphs; connectivity.
//! - [`metrics`]: diameter, variance, clustering number, stopping time.
//! - [`harness`]: scenario presets, Monte Carlo runs, parameter sweeps.
//! - [`io`]: scenario files, CSV artifacts and run manifests.

pub mod configuration;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod graphs;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod rng;

pub use configuration::AgentConfiguration;
pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
