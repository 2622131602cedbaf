use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::configuration::AgentConfiguration;
use crate::dynamics::{simulate, Model, ModelParams, RecordSpec, Trajectory};
use crate::error::{Error, Result};
use crate::graphs::is_connected_within;
use crate::rng::{substream, SimRng, Substream};

/// Draws allowed before a connected uniform start is declared unreachable.
pub const MAX_CONNECTED_ATTEMPTS: usize = 1000;

/// Agents per hexagon vertex, in vertex order.
pub const HEXAGON_MULTIPLICITIES: [usize; 6] = [1, 10, 100, 100, 10, 1];

const HEXAGON_JITTER: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialCondition {
    Explicit {
        dim: usize,
        positions: Vec<f64>,
    },
    /// I.i.d. uniform on `[0, L]^dim`, drawn from the initial-conditions
    /// substream of the scenario seed.
    Uniform {
        n: usize,
        dim: usize,
        domain_length: f64,
        require_connected: bool,
    },
    Hexagon {
        r_star: f64,
    },
    /// Agents at 1, 2, 3, 4 on the line.
    CounterexampleR1,
}

impl InitialCondition {
    pub fn build(&self, seed: u64, eps: f64) -> Result<AgentConfiguration> {
        match self {
            InitialCondition::Explicit { dim, positions } => AgentConfiguration::from_flat(*dim, positions.clone()),
            InitialCondition::Uniform {
                n,
                dim,
                domain_length,
                require_connected,
            } => {
                let mut rng = substream(seed, Substream::InitialConditions);
                uniform_configuration(*n, *dim, *domain_length, *require_connected, eps, &mut rng)
            }
            InitialCondition::Hexagon { r_star } => hexagon_configuration(*r_star),
            InitialCondition::CounterexampleR1 => AgentConfiguration::from_scalars(&[1.0, 2.0, 3.0, 4.0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub initial: InitialCondition,
    pub params: ModelParams,
    pub record_every: usize,
    /// `L` for the clustering number.
    pub domain_length: f64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.record_every == 0 {
            return Err(Error::invalid("record_every", "must be at least 1"));
        }
        if !(self.domain_length > 0.0 && self.domain_length.is_finite()) {
            return Err(Error::invalid("domain_length", "must be positive"));
        }
        if let InitialCondition::Uniform { n, dim, domain_length, .. } = &self.initial {
            if *n == 0 {
                return Err(Error::invalid("n", "must be at least 1"));
            }
            if *dim == 0 {
                return Err(Error::invalid("dim", "must be at least 1"));
            }
            if !(*domain_length > 0.0 && domain_length.is_finite()) {
                return Err(Error::invalid("domain_length", "must be positive"));
            }
        }
        if let InitialCondition::Hexagon { r_star } = &self.initial {
            if !(*r_star > 0.0 && *r_star < 1.0) {
                return Err(Error::invalid("rstar", "hexagon needs 0 < r* < 1"));
            }
        }
        Ok(())
    }

    pub fn build_initial(&self) -> Result<AgentConfiguration> {
        self.initial.build(self.params.seed, self.params.geometry_eps)
    }

    pub fn record_spec(&self) -> RecordSpec {
        RecordSpec {
            every: self.record_every,
            domain_length: self.domain_length,
            keep_snapshots: true,
            stop_below_diameter: None,
        }
    }

    pub fn run(&self) -> Result<(AgentConfiguration, Trajectory)> {
        self.validate()?;
        let initial = self.build_initial()?;
        let trajectory = simulate(&initial, &self.params, &self.record_spec())?;
        Ok((initial, trajectory))
    }
}

/// Four agents on a line with `r* = 1`: the inner two never move.
///
/// Every initial gap is exactly 1, so the preset compares distances without
/// slack. With a slack `eps`, agents 1 and 3 would start to interact once
/// agent 1 gets within `eps` of agent 2, near `t = 2 ln(1 / eps)`.
pub fn scenario_counterexample_rstar1() -> ScenarioSpec {
    ScenarioSpec {
        name: "counterexample-r1".into(),
        initial: InitialCondition::CounterexampleR1,
        params: ModelParams {
            r_star: 1.0,
            t_end: 50.0,
            geometry_eps: 0.0,
            ..ModelParams::new(Model::Nolb)
        },
        record_every: 10,
        domain_length: 4.0,
    }
}

/// Clusters on a regular hexagon with side `1 - r*/2`, sized by
/// [`HEXAGON_MULTIPLICITIES`].
pub fn scenario_hexagon(r_star: f64) -> ScenarioSpec {
    ScenarioSpec {
        name: "hexagon".into(),
        initial: InitialCondition::Hexagon { r_star },
        params: ModelParams {
            r_star,
            t_end: 1.0,
            ..ModelParams::new(Model::NolbFreeze)
        },
        record_every: 10,
        domain_length: 2.0,
    }
}

pub fn scenario_uniform(n: usize, domain_length: f64, dim: usize, seed: u64, require_connected: bool) -> ScenarioSpec {
    ScenarioSpec {
        name: "uniform".into(),
        initial: InitialCondition::Uniform {
            n,
            dim,
            domain_length,
            require_connected,
        },
        params: ModelParams {
            seed,
            t_end: 200.0,
            ..ModelParams::new(Model::Nolb)
        },
        record_every: 10,
        domain_length,
    }
}

/// Vertex `k` sits at angle `k * 60°` on the circle of radius `side`; clone
/// `m` of a vertex is pushed `m * 1e-9` along a golden-angle direction.
pub fn hexagon_configuration(r_star: f64) -> Result<AgentConfiguration> {
    if !(r_star > 0.0 && r_star < 1.0) {
        return Err(Error::invalid("rstar", "hexagon needs 0 < r* < 1"));
    }
    let side = 1.0 - r_star / 2.0;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut points = Vec::new();
    for (k, &count) in HEXAGON_MULTIPLICITIES.iter().enumerate() {
        let angle = k as f64 * std::f64::consts::FRAC_PI_3;
        let (cx, cy) = (side * angle.cos(), side * angle.sin());
        for m in 0..count {
            let theta = m as f64 * golden;
            let r = if m == 0 { 0.0 } else { HEXAGON_JITTER * (m as f64).sqrt() };
            points.push([cx + r * theta.cos(), cy + r * theta.sin()]);
        }
    }
    AgentConfiguration::from_points(&points)
}

/// Uniform draw on `[0, L]^dim`; with `require_connected` it redraws until the
/// interaction graph is connected.
pub fn uniform_configuration(
    n: usize,
    dim: usize,
    domain_length: f64,
    require_connected: bool,
    eps: f64,
    rng: &mut SimRng,
) -> Result<AgentConfiguration> {
    if n == 0 || dim == 0 {
        return Err(Error::invalid("n", "need at least one agent in at least one dimension"));
    }
    if !(domain_length > 0.0 && domain_length.is_finite()) {
        return Err(Error::invalid("domain_length", "must be positive"));
    }
    let attempts = if require_connected { MAX_CONNECTED_ATTEMPTS } else { 1 };
    for _ in 0..attempts {
        let flat: Vec<f64> = (0..n * dim).map(|_| rng.gen::<f64>() * domain_length).collect();
        let config = AgentConfiguration::from_flat(dim, flat)?;
        if !require_connected || is_connected_within(&config, 1.0 + eps) {
            return Ok(config);
        }
    }
    Err(Error::DisconnectedStart {
        attempts,
        n,
        domain_length,
    })
}
