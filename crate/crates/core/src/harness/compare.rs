use serde::{Deserialize, Serialize};

use super::scenario::uniform_configuration;
use crate::configuration::AgentConfiguration;
use crate::dynamics::{simulate, Model, ModelParams, RecordSpec, Trajectory};
use crate::error::Result;
use crate::rng::{substream, Substream};

/// Shared start for comparing bounded confidence, NOLB and RNOLB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSpec {
    pub seed: u64,
    pub n: usize,
    pub domain_length: f64,
    pub r_star: f64,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    /// NOLB and RNOLB runs stop once their diameter reaches this value.
    pub stop_below_diameter: Option<f64>,
}

impl Default for ComparisonSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 50,
            domain_length: 10.0,
            r_star: 0.5,
            dt: 0.01,
            t_end: 500.0,
            record_every: 10,
            stop_below_diameter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationComparison {
    pub initial: AgentConfiguration,
    /// Bounded confidence, NOLB and RNOLB, in that order.
    pub runs: Vec<(Model, Trajectory)>,
}

impl InterpolationComparison {
    pub fn run(&self, model: Model) -> Option<&Trajectory> {
        self.runs.iter().find(|(m, _)| *m == model).map(|(_, t)| t)
    }
}

/// Feeds one connected uniform 1-D start to all three models.
pub fn run_interpolation_comparison(spec: &ComparisonSpec) -> Result<InterpolationComparison> {
    let mut rng = substream(spec.seed, Substream::InitialConditions);
    let initial = uniform_configuration(spec.n, 1, spec.domain_length, true, 1e-9, &mut rng)?;
    let runs = [Model::BoundedConfidence, Model::Nolb, Model::Rnolb]
        .into_iter()
        .map(|model| {
            let params = ModelParams {
                model,
                r_star: spec.r_star,
                dt: spec.dt,
                t_end: spec.t_end,
                seed: spec.seed,
                ..ModelParams::default()
            };
            let record = RecordSpec {
                every: spec.record_every,
                domain_length: spec.domain_length,
                keep_snapshots: false,
                stop_below_diameter: if model == Model::BoundedConfidence { None } else { spec.stop_below_diameter },
            };
            Ok((model, simulate(&initial, &params, &record)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InterpolationComparison { initial, runs })
}
