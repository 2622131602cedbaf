//! Scenario files, CSV outputs and run manifests.

pub mod csv;
pub mod manifest;
pub mod scenario_file;

pub use manifest::{verify_manifest, OutputDigest, RunManifest};
pub use scenario_file::{parse_scenario, parse_scenario_file, write_scenario};
