use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::ScenarioSpec;
use crate::dynamics::{simulate, RecordSpec, RunStats};
use crate::error::{Error, Result};
use crate::metrics::{stopping_time, MetricsSeries};
use crate::rng::realization_seeds;

pub const DEFAULT_QUANTILES: [f64; 5] = [0.0, 0.05, 0.5, 0.95, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSpec {
    pub realizations: usize,
    /// Template run; its seed is the root from which realization seeds are drawn.
    pub scenario: ScenarioSpec,
    pub quantiles: Vec<f64>,
    /// Worker threads, 0 for one per core.
    pub jobs: usize,
    /// End each run once its diameter reaches this value.
    pub stop_below_diameter: Option<f64>,
}

impl MonteCarloSpec {
    pub fn new(scenario: ScenarioSpec, realizations: usize) -> Self {
        Self {
            realizations,
            scenario,
            quantiles: DEFAULT_QUANTILES.to_vec(),
            jobs: 0,
            stop_below_diameter: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::invalid("realizations", "must be at least 1"));
        }
        if self.quantiles.is_empty() {
            return Err(Error::invalid("quantiles", "need at least one probability"));
        }
        if self.quantiles.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(Error::invalid("quantiles", "probabilities must lie in [0, 1]"));
        }
        if self.quantiles.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("quantiles", "must be sorted"));
        }
        self.scenario.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationSummary {
    pub index: usize,
    pub seed: u64,
    pub tau: Option<f64>,
    pub final_time: f64,
    pub final_diameter: f64,
    pub metrics: MetricsSeries,
    pub stats: RunStats,
}

impl RealizationSummary {
    pub fn always_connected(&self) -> bool {
        self.metrics.connected.iter().all(|&c| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub quantiles: Vec<f64>,
    /// Recording times shared by every realization.
    pub times: Vec<f64>,
    /// `table[k][q]` is quantile `q` of the diameter at `times[k]`.
    pub table: Vec<Vec<f64>>,
    pub realizations: Vec<RealizationSummary>,
}

impl MonteCarloResult {
    pub fn taus(&self) -> Vec<Option<f64>> {
        self.realizations.iter().map(|r| r.tau).collect()
    }

    /// Median of the finite stopping times.
    pub fn median_tau(&self) -> Option<f64> {
        let finite: Vec<f64> = self.realizations.iter().filter_map(|r| r.tau).collect();
        (!finite.is_empty()).then(|| quantile(&finite, 0.5))
    }
}

/// Linearly interpolated sample quantile (`(n - 1) p` plotting position).
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

fn run_one(spec: &MonteCarloSpec, index: usize, seed: u64) -> Result<RealizationSummary> {
    let mut scenario = spec.scenario.clone();
    scenario.params.seed = seed;
    let initial = scenario.build_initial()?;
    let record = RecordSpec {
        every: scenario.record_every,
        domain_length: scenario.domain_length,
        keep_snapshots: false,
        stop_below_diameter: spec.stop_below_diameter,
    };
    let tr = simulate(&initial, &scenario.params, &record)?;
    Ok(RealizationSummary {
        index,
        seed,
        tau: stopping_time(&tr.metrics),
        final_time: tr.final_time,
        final_diameter: *tr.metrics.diameter.last().expect("initial state is always recorded"),
        metrics: tr.metrics,
        stats: tr.stats,
    })
}

/// Runs every realization, in parallel, and tabulates diameter quantiles over
/// the recording grid. Runs that stopped early shorten the table to the
/// shortest run.
pub fn run_monte_carlo(spec: &MonteCarloSpec) -> Result<MonteCarloResult> {
    spec.validate()?;
    let seeds = realization_seeds(spec.scenario.params.seed, spec.realizations);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::invalid("jobs", e.to_string()))?;
    let outcomes: Vec<Result<RealizationSummary>> = pool.install(|| {
        seeds
            .par_iter()
            .enumerate()
            .map(|(index, &seed)| run_one(spec, index, seed))
            .collect()
    });
    let mut realizations = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => realizations.push(r),
            Err(source) => {
                return Err(Error::Realization {
                    realization: index,
                    seed: seeds[index],
                    source: Box::new(source),
                })
            }
        }
    }

    let rows = realizations.iter().map(|r| r.metrics.len()).min().unwrap_or(0);
    let times = realizations[0].metrics.times[..rows].to_vec();
    let table = (0..rows)
        .map(|k| {
            let column: Vec<f64> = realizations.iter().map(|r| r.metrics.diameter[k]).collect();
            spec.quantiles.iter().map(|&q| quantile(&column, q)).collect()
        })
        .collect();
    Ok(MonteCarloResult {
        quantiles: spec.quantiles.clone(),
        times,
        table,
        realizations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub r_star: f64,
    pub realizations: usize,
    /// Realizations whose diameter reached 1 within the horizon.
    pub finite: usize,
    pub tau_mean: Option<f64>,
    pub tau_median: Option<f64>,
    /// Stopping-time quantiles at the batch's quantile probabilities.
    pub tau_quantiles: Vec<Option<f64>>,
}

/// Stopping-time statistics for each `r*`. Every `r*` reuses the same
/// realization seeds, and runs end once the diameter reaches 1.
pub fn sweep_rstar(base: &MonteCarloSpec, r_values: &[f64]) -> Result<Vec<SweepRow>> {
    if r_values.is_empty() {
        return Err(Error::invalid("rstar", "sweep needs at least one value"));
    }
    if let Some(r) = r_values.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::invalid("rstar", format!("sweep value {r} is outside (0, 1)")));
    }
    r_values
        .iter()
        .map(|&r_star| {
            let mut spec = base.clone();
            spec.scenario.params.r_star = r_star;
            spec.stop_below_diameter = Some(1.0);
            let result = run_monte_carlo(&spec)?;
            let finite: Vec<f64> = result.realizations.iter().filter_map(|r| r.tau).collect();
            let stat = |f: &dyn Fn(&[f64]) -> f64| (!finite.is_empty()).then(|| f(&finite));
            Ok(SweepRow {
                r_star,
                realizations: result.realizations.len(),
                finite: finite.len(),
                tau_mean: stat(&|v| v.iter().sum::<f64>() / v.len() as f64),
                tau_median: stat(&|v| quantile(v, 0.5)),
                tau_quantiles: spec.quantiles.iter().map(|&q| stat(&|v| quantile(v, q))).collect(),
            })
        })
        .collect()
}
