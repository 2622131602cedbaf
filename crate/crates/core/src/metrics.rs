//! Scalar observables of a configuration and their time series.

use serde::{Deserialize, Serialize};

use crate::configuration::{distance, AgentConfiguration};
use crate::graphs::is_connected_within;

/// Relative slack on the clustering radius so evenly spaced agents at
/// exactly `L / N` are counted.
const CLUSTER_RADIUS_SLACK: f64 = 1e-9;

/// Largest pairwise distance, 0 for a single agent.
pub fn diameter(config: &AgentConfiguration) -> f64 {
    if config.dim() == 1 {
        let xs = config.as_flat();
        let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        return hi - lo;
    }
    let n = config.n_agents();
    let mut best: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max(config.distance(i, j));
        }
    }
    best
}

/// Mean squared distance to the centroid.
pub fn variance(config: &AgentConfiguration) -> f64 {
    let n = config.n_agents() as f64;
    let d = config.dim();
    let mut centroid = vec![0.0; d];
    for p in config.points() {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x / n;
        }
    }
    config.points().map(|p| distance(p, &centroid).powi(2)).sum::<f64>() / n
}

/// Mean number of other agents within `R = L / N` of each agent. Ranges over
/// `[0, N - 1]`; add 1 for the count that includes the agent itself.
pub fn clustering_number(config: &AgentConfiguration, domain_length: f64) -> f64 {
    let n = config.n_agents();
    let radius = domain_length / n as f64 * (1.0 + CLUSTER_RADIUS_SLACK);
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if config.distance(i, j) <= radius {
                pairs += 1;
            }
        }
    }
    2.0 * pairs as f64 / n as f64
}

pub fn consensus_reached(config: &AgentConfiguration, tol: f64) -> bool {
    diameter(config) <= tol
}

/// Observables sampled at the recorded times of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsSeries {
    pub times: Vec<f64>,
    pub diameter: Vec<f64>,
    pub variance: Vec<f64>,
    pub clustering_number: Vec<f64>,
    pub clustering_number_self_inclusive: Vec<f64>,
    pub connected: Vec<bool>,
}

impl MetricsSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the observables of `config` at time `t`. Connectivity uses the
    /// interaction radius `1 + eps`.
    pub fn push(&mut self, t: f64, config: &AgentConfiguration, domain_length: f64, eps: f64) {
        let c = clustering_number(config, domain_length);
        self.times.push(t);
        self.diameter.push(diameter(config));
        self.variance.push(variance(config));
        self.clustering_number.push(c);
        self.clustering_number_self_inclusive.push(c + 1.0);
        self.connected.push(is_connected_within(config, 1.0 + eps));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Equal column lengths and strictly increasing times.
    pub fn is_consistent(&self) -> bool {
        let n = self.times.len();
        [
            self.diameter.len(),
            self.variance.len(),
            self.clustering_number.len(),
            self.clustering_number_self_inclusive.len(),
            self.connected.len(),
        ]
        .iter()
        .all(|&k| k == n)
            && self.times.windows(2).all(|w| w[0] < w[1])
    }

    /// Mean of `values` over the samples with `time <= t_max`.
    pub fn mean_until(&self, values: &[f64], t_max: f64) -> Option<f64> {
        let picked: Vec<f64> = self
            .times
            .iter()
            .zip(values)
            .filter(|(t, _)| **t <= t_max)
            .map(|(_, v)| *v)
            .collect();
        (!picked.is_empty()).then(|| picked.iter().sum::<f64>() / picked.len() as f64)
    }
}

/// First recorded time at which the diameter is at most 1.
pub fn stopping_time(series: &MetricsSeries) -> Option<f64> {
    first_time_below(series, 1.0)
}

pub fn first_time_below(series: &MetricsSeries, level: f64) -> Option<f64> {
    series
        .times
        .iter()
        .zip(&series.diameter)
        .find(|(_, &d)| d <= level)
        .map(|(&t, _)| t)
}
