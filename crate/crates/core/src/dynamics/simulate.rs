use serde::{Deserialize, Serialize};

use super::interaction::InteractionFunction;
use super::step::{euler_step, StepSettings};
pub use super::step::Model;
use crate::configuration::AgentConfiguration;
use crate::error::{Error, Result};
use crate::geometry::ProjectionOptions;
use crate::graphs::is_connected_within;
use crate::metrics::{diameter, MetricsSeries};
use crate::rng::{substream, SimRng, Substream};

/// Time discretization of the velocity field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// `x + dt v(x)`.
    Euler,
    /// Two-stage strong-stability-preserving Runge-Kutta (Heun): the average
    /// of `x` and two chained Euler steps. Still a convex combination of
    /// Euler steps, so hull and diameter bounds carry over.
    #[default]
    SspRk2,
}

impl Integrator {
    pub fn as_str(self) -> &'static str {
        match self {
            Integrator::Euler => "euler",
            Integrator::SspRk2 => "ssp-rk2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Integrator::Euler),
            "ssp-rk2" => Ok(Integrator::SspRk2),
            _ => Err(Error::invalid("integrator", format!("unknown integrator `{s}`, expected euler or ssp-rk2"))),
        }
    }
}

/// Step-rejection test applied by [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardKind {
    None,
    /// Pairs within interaction range before the step must stay within it.
    Pairwise,
    /// A connected interaction graph must stay connected.
    Global,
}

impl GuardKind {
    pub fn for_model(model: Model) -> Self {
        match model {
            Model::BoundedConfidence => GuardKind::None,
            Model::NolbFreeze | Model::Nolb => GuardKind::Pairwise,
            Model::Rnolb => GuardKind::Global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: Model,
    pub r_star: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub projection_tol: f64,
    pub geometry_eps: f64,
    pub phi: InteractionFunction,
    pub integrator: Integrator,
    /// Halve steps that would break interaction links (see [`GuardKind`]).
    pub connectivity_guard: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            model: Model::Nolb,
            r_star: 0.5,
            dt: 0.01,
            t_end: 10.0,
            seed: 0,
            projection_tol: 1e-10,
            geometry_eps: 1e-9,
            phi: InteractionFunction::Indicator,
            integrator: Integrator::SspRk2,
            connectivity_guard: true,
        }
    }
}

impl ModelParams {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_star) {
            return Err(Error::invalid("rstar", format!("{} is outside [0, 1]", self.r_star)));
        }
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(Error::invalid("dt", format!("{} is outside (0, 0.1]", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid("t_end", format!("{} is not a finite nonnegative time", self.t_end)));
        }
        if !(self.projection_tol > 0.0 && self.projection_tol.is_finite()) {
            return Err(Error::invalid("projection_tol", "must be positive"));
        }
        if !(self.geometry_eps >= 0.0 && self.geometry_eps < 0.5) {
            return Err(Error::invalid("geometry_eps", "must lie in [0, 0.5)"));
        }
        Ok(())
    }

    pub fn step_settings(&self) -> StepSettings {
        StepSettings {
            phi: self.phi.clone(),
            r_star: self.r_star,
            geometry_eps: self.geometry_eps,
            projection: ProjectionOptions::with_tol(self.projection_tol),
        }
    }

    /// Number of outer steps needed to reach `t_end`.
    pub fn n_steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    /// Time after `k` outer steps.
    pub fn time_at(&self, k: usize) -> f64 {
        (k as f64 * self.dt).min(self.t_end)
    }
}

/// What [`simulate`] keeps along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSpec {
    /// Record every this many outer steps; the final state is always recorded.
    pub every: usize,
    /// `L` for the clustering number.
    pub domain_length: f64,
    pub keep_snapshots: bool,
    /// Stop as soon as a recorded diameter is at or below this value.
    pub stop_below_diameter: Option<f64>,
}

impl Default for RecordSpec {
    fn default() -> Self {
        Self {
            every: 1,
            domain_length: 10.0,
            keep_snapshots: true,
            stop_below_diameter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: usize,
    /// Accepted sub-steps, equal to `steps` when the guard never fired.
    pub substeps: usize,
    /// Velocity-field evaluations.
    pub evaluations: usize,
    pub guard_halvings: usize,
    /// Steps accepted after the guard ran out of halvings.
    pub guard_exhausted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Empty unless snapshots were requested.
    pub snapshots: Vec<AgentConfiguration>,
    pub metrics: MetricsSeries,
    pub final_state: AgentConfiguration,
    pub final_time: f64,
    pub stats: RunStats,
}

/// Sub-step bookkeeping unit: an outer step is `TICKS` ticks long.
const TICK_BITS: u32 = 20;
const TICKS: u64 = 1 << TICK_BITS;
/// Bound on accepted pieces within one outer step.
const MAX_PIECES: usize = 256;

struct Stepper<'a> {
    params: &'a ModelParams,
    settings: StepSettings,
    guard: GuardKind,
    rng: SimRng,
    stats: RunStats,
}

impl Stepper<'_> {
    fn integrate(&mut self, x: &AgentConfiguration, h: f64) -> Result<AgentConfiguration> {
        let model = self.params.model;
        match self.params.integrator {
            Integrator::Euler => {
                self.stats.evaluations += 1;
                euler_step(x, model, &self.settings, h, &mut self.rng)
            }
            Integrator::SspRk2 => {
                self.stats.evaluations += 2;
                let y1 = euler_step(x, model, &self.settings, h, &mut self.rng)?;
                let y2 = euler_step(&y1, model, &self.settings, h, &mut self.rng)?;
                let flat = x.as_flat().iter().zip(y2.as_flat()).map(|(a, b)| 0.5 * a + 0.5 * b).collect();
                Ok(AgentConfiguration::from_flat_unchecked(x.dim(), flat))
            }
        }
    }

    fn guard_holds(&self, before: &AgentConfiguration, after: &AgentConfiguration, was_connected: bool) -> bool {
        let radius = 1.0 + self.params.geometry_eps;
        match self.guard {
            GuardKind::None => true,
            GuardKind::Global => !was_connected || is_connected_within(after, radius),
            GuardKind::Pairwise => {
                let n = before.n_agents();
                (0..n).all(|i| {
                    (i + 1..n).all(|j| before.distance(i, j) > radius || after.distance(i, j) <= radius)
                })
            }
        }
    }

    /// Advances `x` by `h`, splitting the step by halving while the guard fails.
    fn outer_step(&mut self, x: AgentConfiguration, h: f64) -> Result<AgentConfiguration> {
        self.stats.steps += 1;
        if !self.params.connectivity_guard || self.guard == GuardKind::None {
            self.stats.substeps += 1;
            return self.integrate(&x, h);
        }
        let mut x = x;
        let mut pos: u64 = 0;
        let mut level: u32 = 0;
        let mut pieces = 0usize;
        while pos < TICKS {
            let piece = TICKS >> level;
            let was_connected = self.guard == GuardKind::Global && is_connected_within(&x, 1.0 + self.params.geometry_eps);
            let trial = self.integrate(&x, h * piece as f64 / TICKS as f64)?;
            let out_of_budget = level >= TICK_BITS || pieces + 1 >= MAX_PIECES;
            if self.guard_holds(&x, &trial, was_connected) || out_of_budget {
                if out_of_budget && !self.guard_holds(&x, &trial, was_connected) {
                    self.stats.guard_exhausted += 1;
                }
                x = trial;
                pos += piece;
                pieces += 1;
                self.stats.substeps += 1;
                // grow the piece back once the position is aligned to it
                while level > 0 && pos.is_multiple_of(TICKS >> (level - 1)) {
                    level -= 1;
                }
            } else {
                level += 1;
                self.stats.guard_halvings += 1;
            }
        }
        Ok(x)
    }
}

/// Integrates `initial` from 0 to `params.t_end`.
pub fn simulate(initial: &AgentConfiguration, params: &ModelParams, record: &RecordSpec) -> Result<Trajectory> {
    params.validate()?;
    if record.every == 0 {
        return Err(Error::invalid("record_every", "must be at least 1"));
    }
    if !(record.domain_length > 0.0) {
        return Err(Error::invalid("domain_length", "must be positive"));
    }
    if let Some(agent) = initial.first_non_finite() {
        return Err(Error::NonFinite { agent, time: 0.0 });
    }

    let mut stepper = Stepper {
        params,
        settings: params.step_settings(),
        guard: GuardKind::for_model(params.model),
        rng: substream(params.seed, Substream::Permutations),
        stats: RunStats::default(),
    };
    let mut times = Vec::new();
    let mut snapshots = Vec::new();
    let mut metrics = MetricsSeries::new();
    let mut keep = |t: f64, x: &AgentConfiguration, times: &mut Vec<f64>, snaps: &mut Vec<AgentConfiguration>| {
        times.push(t);
        metrics.push(t, x, record.domain_length, params.geometry_eps);
        if record.keep_snapshots {
            snaps.push(x.clone());
        }
        record.stop_below_diameter.is_some_and(|level| diameter(x) <= level)
    };

    let n_steps = params.n_steps();
    let mut x = initial.clone();
    let mut t = 0.0;
    let mut stop = keep(0.0, &x, &mut times, &mut snapshots);
    let mut k = 0;
    while k < n_steps && !stop {
        let h = params.time_at(k + 1) - params.time_at(k);
        x = stepper.outer_step(x, h)?;
        k += 1;
        t = params.time_at(k);
        if let Some(agent) = x.first_non_finite() {
            return Err(Error::NonFinite { agent, time: t });
        }
        if k % record.every == 0 || k == n_steps {
            stop = keep(t, &x, &mut times, &mut snapshots);
        }
    }

    Ok(Trajectory {
        times,
        snapshots,
        metrics,
        final_state: x,
        final_time: t,
        stats: stepper.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(xs: &[f64]) -> AgentConfiguration {
        AgentConfiguration::from_scalars(xs).unwrap()
    }

    #[test]
    fn zero_horizon_keeps_only_the_start() {
        let p = ModelParams {
            t_end: 0.0,
            ..ModelParams::default()
        };
        let tr = simulate(&cfg(&[0.0, 0.5]), &p, &RecordSpec::default()).unwrap();
        assert_eq!(tr.times, vec![0.0]);
        assert_eq!(tr.snapshots.len(), 1);
    }

    #[test]
    fn single_agent_is_constant() {
        for model in Model::ALL {
            let p = ModelParams {
                t_end: 1.0,
                ..ModelParams::new(model)
            };
            let tr = simulate(&cfg(&[2.5]), &p, &RecordSpec::default()).unwrap();
            assert!(tr.snapshots.iter().all(|s| s.as_flat() == [2.5]));
            assert_eq!(tr.times.len(), 101);
        }
    }

    #[test]
    fn two_agents_decay_exponentially() {
        let p = ModelParams {
            dt: 0.001,
            t_end: 1.0,
            ..ModelParams::new(Model::BoundedConfidence)
        };
        let rec = RecordSpec {
            every: 100,
            keep_snapshots: false,
            ..RecordSpec::default()
        };
        let tr = simulate(&cfg(&[0.0, 0.5]), &p, &rec).unwrap();
        assert_eq!(tr.final_time, 1.0);
        let d = *tr.metrics.diameter.last().unwrap();
        assert!((d - 0.5 * (-1f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn record_grid_includes_final_partial_step() {
        let p = ModelParams {
            dt: 0.1,
            t_end: 0.55,
            ..ModelParams::new(Model::BoundedConfidence)
        };
        let rec = RecordSpec {
            every: 2,
            ..RecordSpec::default()
        };
        let tr = simulate(&cfg(&[0.0, 0.5]), &p, &rec).unwrap();
        assert_eq!(tr.times.len(), 4);
        assert_eq!(*tr.times.last().unwrap(), 0.55);
        assert!((tr.times[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn early_stop_on_diameter() {
        let p = ModelParams {
            t_end: 50.0,
            ..ModelParams::new(Model::BoundedConfidence)
        };
        let rec = RecordSpec {
            stop_below_diameter: Some(0.1),
            ..RecordSpec::default()
        };
        let tr = simulate(&cfg(&[0.0, 0.5]), &p, &rec).unwrap();
        assert!(tr.final_time < 2.0);
        assert!(*tr.metrics.diameter.last().unwrap() <= 0.1);
    }

    #[test]
    fn rejects_bad_parameters() {
        let base = ModelParams::default();
        for bad in [
            ModelParams { r_star: 1.5, ..base.clone() },
            ModelParams { dt: 0.2, ..base.clone() },
            ModelParams { dt: 0.0, ..base.clone() },
            ModelParams { t_end: f64::NAN, ..base.clone() },
            ModelParams { projection_tol: 0.0, ..base.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidParameter { .. })));
        }
        let rec = RecordSpec { every: 0, ..RecordSpec::default() };
        assert!(simulate(&cfg(&[0.0]), &base, &rec).is_err());
    }

    #[test]
    fn same_seed_same_rnolb_run() {
        let p = ModelParams {
            t_end: 2.0,
            seed: 9,
            ..ModelParams::new(Model::Rnolb)
        };
        let start = cfg(&[0.0, 0.6, 1.2, 1.7, 2.5, 3.1]);
        let a = simulate(&start, &p, &RecordSpec::default()).unwrap();
        let b = simulate(&start, &p, &RecordSpec::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integrator_names() {
        for i in [Integrator::Euler, Integrator::SspRk2] {
            assert_eq!(Integrator::parse(i.as_str()).unwrap(), i);
        }
        assert!(Integrator::parse("rk4").is_err());
    }
}
