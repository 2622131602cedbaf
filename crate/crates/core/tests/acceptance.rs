//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nolb::configuration::dot;
use nolb::dynamics::*;
use nolb::geometry::{project_onto_cone, verify_kkt_at, VelocityCone};
use nolb::graphs::{behind_graph, interaction_graph, random_order, relax_behind_graph};
use nolb::harness::*;
use nolb::metrics::{diameter, stopping_time};
use nolb::rng::{substream, SimRng, Substream};
use rand::{Rng, SeedableRng};

const ROOT_SEED: u64 = 2024;
const N: usize = 50;
const DOMAIN: f64 = 10.0;
const DT: f64 = 0.01;
const SWEEP: [f64; 7] = [0.05, 0.1, 0.2, 0.4, 0.5, 0.6, 0.8];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_budget(elapsed: Duration, budget: Duration, detail: String) -> Outcome {
    check(elapsed <= budget, format!("{detail}; {elapsed:.2?} (budget {budget:?})"))
}

fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

fn uniform_spec(model: Model) -> ScenarioSpec {
    let mut s = scenario_uniform(N, DOMAIN, 1, ROOT_SEED, true);
    s.params.model = model;
    s.params.t_end = 200.0;
    s.params.dt = DT;
    s
}

fn consensus_batch(model: Model) -> nolb::Result<MonteCarloResult> {
    let mut spec = MonteCarloSpec::new(uniform_spec(model), 100);
    spec.stop_below_diameter = Some(1e-3);
    run_monte_carlo(&spec)
}

fn max_relative_error(model: Model) -> f64 {
    let params = ModelParams {
        dt: 0.001,
        t_end: 5.0,
        ..ModelParams::new(model)
    };
    let record = RecordSpec {
        every: 1,
        keep_snapshots: false,
        ..RecordSpec::default()
    };
    let start = AgentConfiguration::from_scalars(&[0.0, 0.5]).unwrap();
    let tr = simulate(&start, &params, &record).unwrap();
    tr.times
        .iter()
        .zip(&tr.metrics.diameter)
        .map(|(t, d)| {
            let exact = 0.5 * (-t).exp();
            ((d - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

fn two_agent_decay() -> Outcome {
    let start = Instant::now();
    let bc = max_relative_error(Model::BoundedConfidence);
    let nolb = max_relative_error(Model::Nolb);
    let detail = format!("max relative error bc {bc:.2e}, nolb {nolb:.2e}");
    if bc.max(nolb) > 1e-3 {
        return Err(detail);
    }
    within_budget(start.elapsed(), Duration::from_secs(1), detail)
}

/// Worst ratio of `d(t)` to `d(t0) e^{-(t - t0)} (1 + 10 dt)` over `t >= t0`.
fn envelope_ratio(times: &[f64], diam: &[f64], from: usize, dt: f64) -> f64 {
    let (t0, d0) = (times[from], diam[from]);
    times[from..]
        .iter()
        .zip(&diam[from..])
        .map(|(t, d)| d / (d0 * (-(t - t0)).exp() * (1.0 + 10.0 * dt)))
        .fold(0.0, f64::max)
}

fn exponential_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = SimRng::seed_from_u64(ROOT_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=20);
        let width = rng.gen_range(0.1..=1.0);
        let c = uniform_configuration(n, 1, width, false, 1e-9, &mut rng).unwrap();
        for model in [Model::BoundedConfidence, Model::Nolb] {
            let params = ModelParams {
                t_end: 5.0,
                ..ModelParams::new(model)
            };
            let record = RecordSpec {
                every: 1,
                keep_snapshots: false,
                ..RecordSpec::default()
            };
            let tr = simulate(&c, &params, &record).unwrap();
            if tr.metrics.diameter[0] > 0.0 {
                worst = worst.max(envelope_ratio(&tr.times, &tr.metrics.diameter, 0, params.dt));
            }
        }
    }
    let detail = format!("worst d(t) / envelope {worst:.6}");
    if worst > 1.0 {
        return Err(detail);
    }
    within_budget(start.elapsed(), Duration::from_secs(10), detail)
}

fn counterexample() -> Outcome {
    let spec = scenario_counterexample_rstar1();
    let (_, tr) = spec.run().map_err(|e| e.to_string())?;
    let x = tr.final_state.as_flat();
    let detail = format!("t = {}, x = {x:?}", tr.final_time);
    let ok = (tr.final_time - 50.0).abs() < 1e-9
        && (x[1] - 2.0).abs() <= 1e-6
        && (x[2] - 3.0).abs() <= 1e-6
        && (x[0] - x[1]).abs() <= 1e-3
        && (x[3] - x[2]).abs() <= 1e-3;
    check(ok, detail)
}

fn hexagon() -> Outcome {
    let spec = scenario_hexagon(0.05);
    let (start, frozen) = spec.run().map_err(|e| e.to_string())?;
    let displacement = frozen
        .snapshots
        .iter()
        .map(|s| s.as_flat().iter().zip(start.as_flat()).map(|(a, b)| (a - b).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut params = spec.params.clone();
    params.model = Model::Nolb;
    params.t_end = 500.0;
    let record = RecordSpec {
        every: 10,
        domain_length: spec.domain_length,
        keep_snapshots: false,
        stop_below_diameter: Some(1e-2),
    };
    let tr = simulate(&start, &params, &record).map_err(|e| e.to_string())?;
    let d = diameter(&tr.final_state);
    let detail = format!("freeze displacement {displacement:.2e}; nolb diameter {d:.2e} at t = {:.2}", tr.final_time);
    check(displacement <= 1e-6 && d <= 1e-2 && tr.final_time <= 500.0, detail)
}

fn nolb_consensus(batch: &nolb::Result<MonteCarloResult>, elapsed: Duration) -> Outcome {
    let r = batch.as_ref().map_err(|e| e.to_string())?;
    let reached = r
        .realizations
        .iter()
        .filter(|s| s.final_diameter <= 1e-3 && s.final_time <= 200.0)
        .count();
    let taus: Vec<f64> = r.realizations.iter().filter_map(|s| s.tau).collect();
    let med = (!taus.is_empty()).then(|| median(&taus));
    let detail = format!(
        "{reached}/100 reached 1e-3, {}/100 finite tau, median tau {med:?}",
        taus.len()
    );
    let ok = reached == 100 && taus.len() == 100 && med.is_some_and(|m| (10.0..=100.0).contains(&m));
    if !ok {
        return Err(detail);
    }
    within_budget(elapsed, Duration::from_secs(300), detail)
}

fn two_phase_decay(batch: &nolb::Result<MonteCarloResult>) -> Outcome {
    let r = batch.as_ref().map_err(|e| e.to_string())?;
    let mut worst_rise: f64 = 0.0;
    let mut worst_envelope: f64 = 0.0;
    for s in &r.realizations {
        let m = &s.metrics;
        let Some(tau) = stopping_time(m) else {
            return Err(format!("realization {} never reached diameter 1", s.index));
        };
        let k = m.times.iter().position(|&t| t == tau).unwrap();
        for w in m.diameter[..=k].windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
        worst_envelope = worst_envelope.max(envelope_ratio(&m.times, &m.diameter, k, DT));
    }
    let detail = format!("largest pre-tau rise {worst_rise:.2e}; worst post-tau envelope ratio {worst_envelope:.6}");
    check(worst_rise <= 10.0 * DT && worst_envelope <= 1.0, detail)
}

fn rstar_sweep() -> Outcome {
    let start = Instant::now();
    let spec = MonteCarloSpec::new(uniform_spec(Model::Nolb), 30);
    let rows = sweep_rstar(&spec, &SWEEP).map_err(|e| e.to_string())?;
    let medians: Vec<(f64, Option<f64>)> = rows.iter().map(|r| (r.r_star, r.tau_median)).collect();
    let at = |r: f64| medians.iter().find(|(x, _)| *x == r).and_then(|(_, m)| *m);
    let wide: Vec<f64> = medians.iter().filter(|(r, _)| *r >= 0.2).filter_map(|(_, m)| *m).collect();
    let detail = format!("medians {medians:?}");
    let (Some(low), Some(mid)) = (at(0.05), at(0.5)) else {
        return Err(detail);
    };
    if wide.len() != medians.iter().filter(|(r, _)| *r >= 0.2).count() {
        return Err(detail);
    }
    let flatness = wide.iter().cloned().fold(f64::MIN, f64::max) / wide.iter().cloned().fold(f64::MAX, f64::min);
    let detail = format!("{detail}; flatness over r* >= 0.2 = {flatness:.3}");
    if !(low > mid && flatness <= 1.5) {
        return Err(detail);
    }
    within_budget(start.elapsed(), Duration::from_secs(600), detail)
}

/// Relaxed behind graphs of `config` under 20 random owner orders all have
/// the same number of edges. Returns that count.
fn edge_count_is_invariant(config: &AgentConfiguration, r_star: f64, rng: &mut SimRng) -> Option<usize> {
    let eps = 1e-9;
    let w = interaction_weights(config, &InteractionFunction::Indicator, eps);
    let avg = local_average(config, &w);
    let e = interaction_graph(config, eps);
    let b = behind_graph(config, &avg, r_star, eps);
    let counts: Vec<usize> = (0..20)
        .map(|_| relax_behind_graph(&e, &b, &random_order(config.n_agents(), rng)).edge_count())
        .collect();
    counts.iter().all(|&c| c == counts[0]).then_some(counts[0])
}

fn rnolb_properties(nolb: &nolb::Result<MonteCarloResult>) -> Outcome {
    let nolb = nolb.as_ref().map_err(|e| e.to_string())?;
    let rnolb = consensus_batch(Model::Rnolb).map_err(|e| e.to_string())?;
    let disconnected = rnolb.realizations.iter().filter(|s| !s.always_connected()).count();
    let taus = |r: &MonteCarloResult| r.realizations.iter().map(|s| s.tau.unwrap_or(f64::INFINITY)).collect::<Vec<_>>();
    let (med_r, med_n) = (median(&taus(&rnolb)), median(&taus(nolb)));

    // edge counts on configurations visited by RNOLB runs and on fresh starts
    let mut rng = substream(ROOT_SEED, Substream::Permutations);
    let mut tested = 0;
    let mut with_edges = 0;
    let mut varying = 0;
    let spec = uniform_spec(Model::Rnolb);
    for seed in 0..5 {
        let start = InitialCondition::Uniform {
            n: N,
            dim: 1,
            domain_length: DOMAIN,
            require_connected: true,
        }
        .build(seed, 1e-9)
        .map_err(|e| e.to_string())?;
        let params = ModelParams {
            seed,
            t_end: 100.0,
            ..spec.params.clone()
        };
        let record = RecordSpec {
            every: 100,
            keep_snapshots: true,
            ..RecordSpec::default()
        };
        let tr = simulate(&start, &params, &record).map_err(|e| e.to_string())?;
        for s in &tr.snapshots {
            tested += 1;
            match edge_count_is_invariant(s, 0.5, &mut rng) {
                Some(0) => {}
                Some(_) => with_edges += 1,
                None => varying += 1,
            }
        }
    }
    let detail = format!(
        "{disconnected}/100 lost connectivity; median tau rnolb {med_r:.2} vs nolb {med_n:.2}; \
         edge counts varied on {varying}/{tested} configurations ({with_edges} with behind edges)"
    );
    check(disconnected == 0 && med_r >= med_n && varying == 0 && with_edges > 0, detail)
}

fn interpolation_ordering() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in 0..5 {
        let spec = ComparisonSpec {
            seed,
            t_end: 10.0,
            stop_below_diameter: None,
            ..ComparisonSpec::default()
        };
        let cmp = run_interpolation_comparison(&spec).map_err(|e| e.to_string())?;
        let mean = |model: Model, clustering: bool| {
            let m = &cmp.run(model).unwrap().metrics;
            let values = if clustering { &m.clustering_number } else { &m.variance };
            m.mean_until(values, 10.0).unwrap()
        };
        let c = [Model::BoundedConfidence, Model::Rnolb, Model::Nolb].map(|m| mean(m, true));
        let v = [Model::Nolb, Model::Rnolb, Model::BoundedConfidence].map(|m| mean(m, false));
        ok &= c[0] >= c[1] && c[1] >= c[2] && v[0] <= v[1] && v[1] <= v[2];
        lines.push(format!(
            "seed {seed}: clustering bc {:.3} rnolb {:.3} nolb {:.3}, variance nolb {:.3} rnolb {:.3} bc {:.3}",
            c[0], c[1], c[2], v[0], v[1], v[2]
        ));
    }
    check(ok, lines.join("; "))
}

fn random_problem(rng: &mut SimRng, max_constraints: usize, max_dim: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = rng.gen_range(1..=max_dim);
    let vector = |rng: &mut SimRng| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let v = vector(rng);
    let m = rng.gen_range(0..=max_constraints);
    let mut cs = Vec::with_capacity(m);
    while cs.len() < m {
        let u = vector(rng);
        if dot(&u, &u) > 1e-6 {
            cs.push(u);
        }
    }
    (v, cs)
}

fn projection_kernel() -> Outcome {
    let mut rng = SimRng::seed_from_u64(ROOT_SEED);
    let mut failed_kkt = 0;
    let mut worst_kkt: f64 = 0.0;
    for _ in 0..1000 {
        let (v, cs) = random_problem(&mut rng, 8, 4);
        let cone = VelocityCone::from_constraints(v.len(), &cs).map_err(|e| e.to_string())?;
        let cert = project_onto_cone(&v, &cone, 1e-10).map_err(|e| e.to_string())?;
        let report = verify_kkt_at(&v, &cone, &cert, 1e-10);
        worst_kkt = worst_kkt.max(report.max_residual());
        failed_kkt += usize::from(!report.passed);
    }
    let mut worst_gap: f64 = 0.0;
    for _ in 0..1000 {
        let (v, cs) = random_problem(&mut rng, 4, 3);
        let cone = VelocityCone::from_constraints(v.len(), &cs).map_err(|e| e.to_string())?;
        let ours = project_onto_cone(&v, &cone, 1e-10).map_err(|e| e.to_string())?.projected;
        let oracle = common::brute_force(&v, &cs);
        let gap = ours.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_gap = worst_gap.max(gap);
    }
    let detail = format!(
        "{failed_kkt}/1000 certificates failed (worst residual {worst_kkt:.2e}); worst oracle gap {worst_gap:.2e}"
    );
    check(failed_kkt == 0 && worst_gap <= 1e-9, detail)
}

fn one_dimensional_reduction() -> Outcome {
    let mut rng = SimRng::seed_from_u64(ROOT_SEED);
    let mut worst: f64 = 0.0;
    let mut frozen = 0;
    let settings_tol = StepSettings::default().projection.tol;
    for _ in 0..100 {
        let n = rng.gen_range(2..=30);
        let length = rng.gen_range(0.5..(n as f64) * 0.8);
        let c = uniform_configuration(n, 1, length, false, 1e-9, &mut rng).unwrap();
        let settings = StepSettings {
            r_star: rng.gen_range(0.05..0.95),
            ..StepSettings::default()
        };
        let a = step_nolb(&c, &settings, DT).map_err(|e| e.to_string())?;
        let b = step_nolb_freeze(&c, &settings, DT);
        worst = worst.max(a.as_flat().iter().zip(b.as_flat()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        frozen += b.as_flat().iter().zip(c.as_flat()).filter(|(x, y)| x == y).count();
    }
    check(
        worst <= settings_tol,
        format!("largest difference {worst:.2e} (tolerance {settings_tol:e}); {frozen} frozen agents"),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name} [{elapsed:.1?}] {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name} [{elapsed:.1?}] {detail}");
            }
        }
    };

    report("two_agent_exact_decay", &mut two_agent_decay);
    report("exponential_bound", &mut exponential_bound);
    report("rstar_one_counterexample", &mut counterexample);
    report("hexagon", &mut hexagon);

    let start = Instant::now();
    let batch = consensus_batch(Model::Nolb);
    let batch_time = start.elapsed();
    report("nolb_consensus_at_scale", &mut || nolb_consensus(&batch, batch_time));
    report("two_phase_decay", &mut || two_phase_decay(&batch));
    report("tau_vs_rstar", &mut rstar_sweep);
    report("rnolb_properties", &mut || rnolb_properties(&batch));
    report("interpolation_ordering", &mut interpolation_ordering);
    report("projection_kernel", &mut projection_kernel);
    report("one_dimensional_reduction", &mut one_dimensional_reduction);

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
