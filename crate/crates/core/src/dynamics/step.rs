use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::interaction::{InteractionFunction, LocalState};
use crate::configuration::AgentConfiguration;
use crate::error::{Error, Result};
use crate::geometry::{project_onto_cone_with, ProjectionOptions, VelocityCone};
use crate::graphs::{in_critical_region, random_order, relax_behind_graph, DirectedGraph, UndirectedGraph};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "bc")]
    BoundedConfidence,
    #[serde(rename = "nolb-freeze")]
    NolbFreeze,
    #[serde(rename = "nolb")]
    Nolb,
    #[serde(rename = "rnolb")]
    Rnolb,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::BoundedConfidence, Model::NolbFreeze, Model::Nolb, Model::Rnolb];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::BoundedConfidence => "bc",
            Model::NolbFreeze => "nolb-freeze",
            Model::Nolb => "nolb",
            Model::Rnolb => "rnolb",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid("model", format!("unknown model `{s}`, expected bc, nolb-freeze, nolb or rnolb")))
    }
}

/// Everything a single velocity evaluation depends on besides the state.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSettings {
    pub phi: InteractionFunction,
    pub r_star: f64,
    pub geometry_eps: f64,
    pub projection: ProjectionOptions,
}

impl Default for StepSettings {
    fn default() -> Self {
        Self {
            phi: InteractionFunction::Indicator,
            r_star: 0.5,
            geometry_eps: 1e-9,
            projection: ProjectionOptions::default(),
        }
    }
}

/// Indices `j != i` in the critical region of agent `i`: at distance within
/// `[1 - r*, 1]` (widened by `eps`) and not ahead of the desired velocity.
pub fn critical_region_members(
    i: usize,
    config: &AgentConfiguration,
    averages: &AgentConfiguration,
    r_star: f64,
    eps: f64,
) -> Vec<usize> {
    let xi = config.agent(i);
    let desired: Vec<f64> = averages.agent(i).iter().zip(xi).map(|(a, x)| a - x).collect();
    (0..config.n_agents())
        .filter(|&j| j != i && in_critical_region(xi, config.agent(j), &desired, config.distance(i, j), r_star, eps))
        .collect()
}

/// Velocity field of `model` at `config`. RNOLB draws one permutation from
/// `rng`; the other models leave it untouched.
pub fn velocities(
    config: &AgentConfiguration,
    model: Model,
    settings: &StepSettings,
    rng: &mut SimRng,
) -> Result<AgentConfiguration> {
    let state = LocalState::new(config, &settings.phi, settings.geometry_eps);
    let flat = velocity_field(&state, model, settings, rng)?;
    Ok(AgentConfiguration::from_flat_unchecked(config.dim(), flat))
}

pub(crate) fn velocity_field(
    state: &LocalState<'_>,
    model: Model,
    settings: &StepSettings,
    rng: &mut SimRng,
) -> Result<Vec<f64>> {
    let n = state.n();
    let d = state.config.dim();
    let mut out = Vec::with_capacity(n * d);
    match model {
        Model::BoundedConfidence => {
            for i in 0..n {
                out.extend(state.desired(i));
            }
        }
        Model::NolbFreeze => {
            for i in 0..n {
                let v = state.desired(i);
                if behind_of(state, i, &v, settings).next().is_some() {
                    out.extend(std::iter::repeat_n(0.0, d));
                } else {
                    out.extend(v);
                }
            }
        }
        Model::Nolb => {
            for i in 0..n {
                let v = state.desired(i);
                let behind: Vec<usize> = behind_of(state, i, &v, settings).collect();
                out.extend(project(state, i, v, &behind, settings)?);
            }
        }
        Model::Rnolb => {
            let behind = behind_graph_of(state, settings);
            if behind.is_empty() {
                // nothing to relax, but keep one permutation per evaluation
                let _ = random_order(n, rng);
                for i in 0..n {
                    out.extend(state.desired(i));
                }
            } else {
                let interaction = interaction_graph_of(state, settings.geometry_eps);
                let order = random_order(n, rng);
                let relaxed = relax_behind_graph(&interaction, &behind, &order);
                for i in 0..n {
                    let v = state.desired(i);
                    out.extend(project(state, i, v, relaxed.out_neighbors(i), settings)?);
                }
            }
        }
    }
    Ok(out)
}

fn behind_of<'s>(
    state: &'s LocalState<'_>,
    i: usize,
    desired: &'s [f64],
    settings: &StepSettings,
) -> impl Iterator<Item = usize> + 's {
    let (r_star, eps) = (settings.r_star, settings.geometry_eps);
    let xi = state.config.agent(i);
    (0..state.n()).filter(move |&j| {
        j != i && in_critical_region(xi, state.config.agent(j), desired, state.dist(i, j), r_star, eps)
    })
}

fn behind_graph_of(state: &LocalState<'_>, settings: &StepSettings) -> DirectedGraph {
    let mut g = DirectedGraph::new(state.n());
    for i in 0..state.n() {
        let v = state.desired(i);
        for j in behind_of(state, i, &v, settings) {
            g.add_edge(i, j);
        }
    }
    g
}

fn interaction_graph_of(state: &LocalState<'_>, eps: f64) -> UndirectedGraph {
    let n = state.n();
    let mut g = UndirectedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if state.dist(i, j) <= 1.0 + eps {
                g.add_edge(i, j);
            }
        }
    }
    g
}

fn project(state: &LocalState<'_>, i: usize, v: Vec<f64>, behind: &[usize], settings: &StepSettings) -> Result<Vec<f64>> {
    if behind.is_empty() {
        return Ok(v);
    }
    let xi = state.config.agent(i);
    let d = xi.len();
    let mut cone = VelocityCone::whole_space(d);
    let mut u = vec![0.0; d];
    for &j in behind {
        for (k, (a, b)) in state.config.agent(j).iter().zip(xi).enumerate() {
            u[k] = a - b;
        }
        // coincident agents can only be behind when r* = 1; they add no constraint
        if u.iter().any(|&c| c != 0.0) {
            cone.push(&u)?;
        }
    }
    if cone.contains(&v, 0.0) {
        return Ok(v);
    }
    Ok(project_onto_cone_with(&v, &cone, &settings.projection)?.projected)
}

fn euler(config: &AgentConfiguration, velocity: &[f64], dt: f64) -> AgentConfiguration {
    let flat = config.as_flat().iter().zip(velocity).map(|(x, v)| x + dt * v).collect();
    AgentConfiguration::from_flat_unchecked(config.dim(), flat)
}

pub(crate) fn euler_step(
    config: &AgentConfiguration,
    model: Model,
    settings: &StepSettings,
    dt: f64,
    rng: &mut SimRng,
) -> Result<AgentConfiguration> {
    let state = LocalState::new(config, &settings.phi, settings.geometry_eps);
    let v = velocity_field(&state, model, settings, rng)?;
    Ok(euler(config, &v, dt))
}

fn deterministic_step(config: &AgentConfiguration, model: Model, settings: &StepSettings, dt: f64) -> Result<AgentConfiguration> {
    // the rng is only consulted by RNOLB
    let mut unused = crate::rng::substream(0, crate::rng::Substream::Permutations);
    euler_step(config, model, settings, dt, &mut unused)
}

/// One forward-Euler step of bounded confidence: `x_i += dt (x̄_i - x_i)`.
pub fn step_bounded_confidence(config: &AgentConfiguration, settings: &StepSettings, dt: f64) -> AgentConfiguration {
    deterministic_step(config, Model::BoundedConfidence, settings, dt).expect("bounded confidence cannot fail")
}

/// One forward-Euler step of the freeze rule: agents with an occupied critical
/// region stay put, the others move as in bounded confidence.
pub fn step_nolb_freeze(config: &AgentConfiguration, settings: &StepSettings, dt: f64) -> AgentConfiguration {
    deterministic_step(config, Model::NolbFreeze, settings, dt).expect("freeze rule cannot fail")
}

/// One forward-Euler step of NOLB.
pub fn step_nolb(config: &AgentConfiguration, settings: &StepSettings, dt: f64) -> Result<AgentConfiguration> {
    deterministic_step(config, Model::Nolb, settings, dt)
}

/// One forward-Euler step of RNOLB with a fresh agent order drawn from `rng`.
pub fn step_rnolb(
    config: &AgentConfiguration,
    settings: &StepSettings,
    dt: f64,
    rng: &mut SimRng,
) -> Result<AgentConfiguration> {
    euler_step(config, Model::Rnolb, settings, dt, rng)
}
