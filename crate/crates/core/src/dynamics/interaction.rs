use serde::{Deserialize, Serialize};

use crate::configuration::{distance, AgentConfiguration};
use crate::error::{Error, Result};

/// The interaction function `Φ`: positive on `[0, 1]`, zero beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum InteractionFunction {
    /// `Φ = 1` on `[0, 1]`.
    #[default]
    Indicator,
    /// `values[k]` on `[breakpoints[k], breakpoints[k + 1])`, the last piece
    /// closed at 1. Breakpoints run from 0 to 1.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
}


impl InteractionFunction {
    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::invalid(
                "interaction",
                "need k + 1 breakpoints for k values, k >= 1",
            ));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::invalid("interaction", "breakpoints must start at 0 and end at 1"));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("interaction", "breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("interaction", "values must be positive and finite"));
        }
        Ok(InteractionFunction::PiecewiseConstant { breakpoints, values })
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        if !(0.0..=1.0).contains(&r) {
            return 0.0;
        }
        match self {
            InteractionFunction::Indicator => 1.0,
            InteractionFunction::PiecewiseConstant { breakpoints, values } => {
                // index of the last breakpoint <= r, capped at the final piece
                let k = breakpoints.partition_point(|&b| b <= r).saturating_sub(1);
                values[k.min(values.len() - 1)]
            }
        }
    }

    /// `m`, the minimum of `Φ` on `[0, 1]`.
    pub fn min_value(&self) -> f64 {
        match self {
            InteractionFunction::Indicator => 1.0,
            InteractionFunction::PiecewiseConstant { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// `M`, the maximum of `Φ` on `[0, 1]`.
    pub fn max_value(&self) -> f64 {
        match self {
            InteractionFunction::Indicator => 1.0,
            InteractionFunction::PiecewiseConstant { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// `Φ(r)` with the support boundary widened to `1 + eps`, matching the
    /// interaction graph.
    #[inline]
    pub(crate) fn weight(&self, r: f64, eps: f64) -> f64 {
        if r <= 1.0 + eps {
            self.evaluate(r.min(1.0))
        } else {
            0.0
        }
    }
}

/// Row-stochastic interaction weights `a_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.n)
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Whether `a_ij > 0` exactly when `a_ji > 0`.
    pub fn has_symmetric_support(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| (self.get(i, j) > 0.0) == (self.get(j, i) > 0.0)))
    }
}

/// `a_ij = Φ(|x_j - x_i|) / Σ_k Φ(|x_k - x_i|)`. The self term keeps the
/// denominator at least `m`.
pub fn interaction_weights(config: &AgentConfiguration, phi: &InteractionFunction, eps: f64) -> WeightMatrix {
    let n = config.n_agents();
    let dist = pairwise_distances(config);
    weights_from_distances(n, &dist, phi, eps)
}

/// `x̄_i = Σ_j a_ij x_j`.
pub fn local_average(config: &AgentConfiguration, w: &WeightMatrix) -> AgentConfiguration {
    let n = config.n_agents();
    let d = config.dim();
    assert_eq!(w.n(), n, "weight matrix does not match configuration");
    let mut out = vec![0.0; n * d];
    for i in 0..n {
        let row = w.row(i);
        let acc = &mut out[i * d..(i + 1) * d];
        for (j, &a) in row.iter().enumerate() {
            if a != 0.0 {
                for (o, x) in acc.iter_mut().zip(config.agent(j)) {
                    *o += a * x;
                }
            }
        }
    }
    AgentConfiguration::from_flat_unchecked(d, out)
}

pub(crate) fn pairwise_distances(config: &AgentConfiguration) -> Vec<f64> {
    let n = config.n_agents();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let r = distance(config.agent(i), config.agent(j));
            dist[i * n + j] = r;
            dist[j * n + i] = r;
        }
    }
    dist
}

fn weights_from_distances(n: usize, dist: &[f64], phi: &InteractionFunction, eps: f64) -> WeightMatrix {
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut entries[i * n..(i + 1) * n];
        let mut total = 0.0;
        for (a, &r) in row.iter_mut().zip(&dist[i * n..(i + 1) * n]) {
            *a = phi.weight(r, eps);
            total += *a;
        }
        let inv = 1.0 / total;
        row.iter_mut().for_each(|a| *a *= inv);
    }
    WeightMatrix { n, entries }
}

/// Everything a stepper needs about one configuration.
pub(crate) struct LocalState<'a> {
    pub config: &'a AgentConfiguration,
    pub dist: Vec<f64>,
    pub averages: AgentConfiguration,
}

impl<'a> LocalState<'a> {
    pub fn new(config: &'a AgentConfiguration, phi: &InteractionFunction, eps: f64) -> Self {
        let n = config.n_agents();
        let dist = pairwise_distances(config);
        let weights = weights_from_distances(n, &dist, phi, eps);
        let averages = local_average(config, &weights);
        Self { config, dist, averages }
    }

    pub fn n(&self) -> usize {
        self.config.n_agents()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n() + j]
    }

    /// Desired velocity `x̄_i - x_i`.
    pub fn desired(&self, i: usize) -> Vec<f64> {
        self.averages
            .agent(i)
            .iter()
            .zip(self.config.agent(i))
            .map(|(a, x)| a - x)
            .collect()
    }
}
