//! Geometric kernels: projection onto polyhedral cones, convex-hull
//! containment in the plane, bounding boxes.
//!
//! A [`VelocityCone`] is `{ v : <v, u_k> >= 0 for every constraint u_k }`.
//! Its Euclidean projection `P(x)` is characterized by the KKT system
//!
//! ```text
//! P(x) = x + sum_k lambda_k u_k,   lambda_k >= 0,
//! <P(x), u_k> >= 0,                lambda_k <P(x), u_k> = 0,
//! ```
//!
//! and [`project_onto_cone`] returns the multipliers alongside the projection
//! so callers can check that system with [`verify_kkt`].

use crate::configuration::{dot, norm};
use crate::error::{Error, Result};

/// Residual of Gram-Schmidt below which a unit vector counts as linearly
/// dependent on the ones before it.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityCone {
    dim: usize,
    constraints: Vec<f64>,
}

impl VelocityCone {
    /// The cone with no constraints, i.e. all of `R^dim`.
    pub fn whole_space(dim: usize) -> Self {
        assert!(dim > 0, "cone dimension must be positive");
        Self {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn from_constraints<P: AsRef<[f64]>>(dim: usize, constraints: &[P]) -> Result<Self> {
        let mut cone = Self::whole_space(dim);
        for u in constraints {
            cone.push(u.as_ref())?;
        }
        Ok(cone)
    }

    /// Adds the half-space `<v, u> >= 0`. The vector must be finite and nonzero.
    pub fn push(&mut self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::invalid(
                "constraint",
                format!("dimension {} does not match cone dimension {}", u.len(), self.dim),
            ));
        }
        let n = norm(u);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid("constraint", "must be finite and nonzero"));
        }
        self.constraints.extend_from_slice(u);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.constraints.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn constraint(&self, k: usize) -> &[f64] {
        &self.constraints[k * self.dim..(k + 1) * self.dim]
    }

    pub fn constraints(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.constraints.chunks_exact(self.dim)
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        self.constraints().all(|u| dot(v, u) >= -tol)
    }
}

/// Solver used when a cone has more distinct constraints than `exact_limit`,
/// or when the exact answer fails its own certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Lawson-Hanson active set on the dual nonnegative least-squares problem.
    LawsonHanson,
    /// Dykstra's alternating projections onto the half-spaces.
    Dykstra,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    pub tol: f64,
    /// Constraints whose directions differ by less than this angle (radians)
    /// are merged before active-set enumeration.
    pub dedup_angle: f64,
    /// Largest number of distinct constraints handled by exact enumeration.
    pub exact_limit: usize,
    pub fallback: Fallback,
    pub max_iterations: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            dedup_angle: 1e-9,
            exact_limit: 12,
            fallback: Fallback::LawsonHanson,
            max_iterations: 10_000,
        }
    }
}

impl ProjectionOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionMethod {
    Identity,
    ActiveSet,
    LawsonHanson,
    Dykstra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCertificate {
    pub projected: Vec<f64>,
    /// One multiplier per cone constraint, in constraint order.
    pub multipliers: Vec<f64>,
    pub feasibility_residual: f64,
    pub complementarity_residual: f64,
    pub tol: f64,
    pub method: ProjectionMethod,
}

/// Residuals of the KKT system recomputed from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    pub stationarity: f64,
    pub feasibility: f64,
    pub complementarity: f64,
    /// Magnitude of the most negative multiplier, 0 if all are nonnegative.
    pub negative_multiplier: f64,
    pub passed: bool,
}

impl KktReport {
    pub fn max_residual(&self) -> f64 {
        self.stationarity
            .max(self.feasibility)
            .max(self.complementarity)
            .max(self.negative_multiplier)
    }
}

/// Projection of `v` onto `cone` with default options and tolerance `tol`.
pub fn project_onto_cone(v: &[f64], cone: &VelocityCone, tol: f64) -> Result<ProjectionCertificate> {
    project_onto_cone_with(v, cone, &ProjectionOptions::with_tol(tol))
}

pub fn project_onto_cone_with(
    v: &[f64],
    cone: &VelocityCone,
    opts: &ProjectionOptions,
) -> Result<ProjectionCertificate> {
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("projection_tol", "must be positive"));
    }
    assert_eq!(v.len(), cone.dim(), "vector and cone dimensions differ");
    let m = cone.len();

    if cone.is_empty() || cone.contains(v, 0.0) {
        return Ok(certify(cone, v.to_vec(), vec![0.0; m], opts.tol, ProjectionMethod::Identity));
    }

    let units = UnitConstraints::new(cone);
    let reps = units.representatives(opts.dedup_angle);

    if reps.len() <= opts.exact_limit {
        if let Some((y, lam_reps)) = enumerate_active_sets(v, &units, &reps, opts.tol) {
            let multipliers = units.original_multipliers(&reps, &lam_reps);
            let cert = certify(cone, y, multipliers, opts.tol, ProjectionMethod::ActiveSet);
            if cert_ok(&cert) {
                return Ok(cert);
            }
        }
    }

    let all: Vec<usize> = (0..m).collect();
    let (y, lam, method) = match opts.fallback {
        Fallback::LawsonHanson => {
            let (y, lam) = lawson_hanson(v, &units, &all, opts)?;
            (y, lam, ProjectionMethod::LawsonHanson)
        }
        Fallback::Dykstra => {
            let (y, lam) = dykstra(v, &units, &all, opts)?;
            (y, lam, ProjectionMethod::Dykstra)
        }
    };
    let multipliers = units.original_multipliers(&all, &lam);
    Ok(certify(cone, y, multipliers, opts.tol, method))
}

fn cert_ok(cert: &ProjectionCertificate) -> bool {
    cert.feasibility_residual <= cert.tol && cert.complementarity_residual <= cert.tol
}

fn certify(
    cone: &VelocityCone,
    projected: Vec<f64>,
    multipliers: Vec<f64>,
    tol: f64,
    method: ProjectionMethod,
) -> ProjectionCertificate {
    let mut feasibility: f64 = 0.0;
    let mut complementarity: f64 = 0.0;
    for (u, &lam) in cone.constraints().zip(&multipliers) {
        let g = dot(&projected, u);
        feasibility = feasibility.max(-g);
        complementarity = complementarity.max((lam * g).abs());
    }
    ProjectionCertificate {
        projected,
        multipliers,
        feasibility_residual: feasibility.max(0.0),
        complementarity_residual: complementarity,
        tol,
        method,
    }
}

/// Recomputes every KKT residual of `cert` against `(v, cone)`; passes iff all
/// of them are within the certificate's tolerance.
pub fn verify_kkt(v: &[f64], cone: &VelocityCone, cert: &ProjectionCertificate) -> KktReport {
    verify_kkt_at(v, cone, cert, cert.tol)
}

pub fn verify_kkt_at(v: &[f64], cone: &VelocityCone, cert: &ProjectionCertificate, tol: f64) -> KktReport {
    let d = cone.dim();
    if cert.projected.len() != d || cert.multipliers.len() != cone.len() || v.len() != d {
        return KktReport {
            stationarity: f64::INFINITY,
            feasibility: f64::INFINITY,
            complementarity: f64::INFINITY,
            negative_multiplier: f64::INFINITY,
            passed: false,
        };
    }
    let mut rebuilt = v.to_vec();
    for (u, &lam) in cone.constraints().zip(&cert.multipliers) {
        for (r, &uc) in rebuilt.iter_mut().zip(u) {
            *r += lam * uc;
        }
    }
    let stationarity = rebuilt
        .iter()
        .zip(&cert.projected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut feasibility: f64 = 0.0;
    let mut complementarity: f64 = 0.0;
    for (u, &lam) in cone.constraints().zip(&cert.multipliers) {
        let g = dot(&cert.projected, u);
        feasibility = feasibility.max(-g);
        complementarity = complementarity.max((lam * g).abs());
    }
    let negative_multiplier = cert.multipliers.iter().fold(0.0f64, |acc, &l| acc.max(-l));
    let finite = stationarity.is_finite() && feasibility.is_finite() && complementarity.is_finite();
    KktReport {
        stationarity,
        feasibility,
        complementarity,
        negative_multiplier,
        passed: finite
            && stationarity <= tol
            && feasibility <= tol
            && complementarity <= tol
            && negative_multiplier <= tol,
    }
}

/// Cone constraints scaled to unit length. Scaling a constraint does not change
/// the cone; multipliers are mapped back with the recorded norms.
struct UnitConstraints {
    dim: usize,
    units: Vec<f64>,
    norms: Vec<f64>,
}

impl UnitConstraints {
    fn new(cone: &VelocityCone) -> Self {
        let mut units = Vec::with_capacity(cone.len() * cone.dim());
        let mut norms = Vec::with_capacity(cone.len());
        for u in cone.constraints() {
            let n = norm(u);
            norms.push(n);
            units.extend(u.iter().map(|x| x / n));
        }
        Self {
            dim: cone.dim(),
            units,
            norms,
        }
    }

    fn unit(&self, k: usize) -> &[f64] {
        &self.units[k * self.dim..(k + 1) * self.dim]
    }

    /// Indices of one constraint per group of near-parallel directions.
    fn representatives(&self, angle: f64) -> Vec<usize> {
        let mut reps: Vec<usize> = Vec::new();
        for k in 0..self.norms.len() {
            let w = self.unit(k);
            let duplicate = reps.iter().any(|&r| {
                let chord = w
                    .iter()
                    .zip(self.unit(r))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                // chord = 2 sin(angle / 2)
                chord < angle
            });
            if !duplicate {
                reps.push(k);
            }
        }
        reps
    }

    fn original_multipliers(&self, subset: &[usize], lam_units: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.norms.len()];
        for (&k, &l) in subset.iter().zip(lam_units) {
            out[k] = l / self.norms[k];
        }
        out
    }
}

/// Thin QR of a set of unit columns built by modified Gram-Schmidt.
struct Qr {
    dim: usize,
    q: Vec<f64>,
    /// Upper triangular, row-major, `k x k`.
    r: Vec<f64>,
    k: usize,
}

impl Qr {
    fn new(dim: usize, capacity: usize) -> Self {
        Self {
            dim,
            q: Vec::with_capacity(dim * capacity),
            r: vec![0.0; capacity * capacity],
            k: 0,
        }
    }

    fn cap(&self) -> usize {
        (self.r.len() as f64).sqrt() as usize
    }

    fn clear(&mut self) {
        self.q.clear();
        self.r.iter_mut().for_each(|x| *x = 0.0);
        self.k = 0;
    }

    /// Residual norm of `w` against the current basis.
    fn residual_norm(&self, w: &[f64]) -> f64 {
        let mut t = w.to_vec();
        for b in 0..self.k {
            let qb = &self.q[b * self.dim..(b + 1) * self.dim];
            let c = dot(qb, &t);
            t.iter_mut().zip(qb).for_each(|(x, q)| *x -= c * q);
        }
        norm(&t)
    }

    /// Appends a column; returns false (and leaves the factorization intact)
    /// if it is numerically dependent on the current columns.
    fn push(&mut self, w: &[f64]) -> bool {
        let cap = self.cap();
        assert!(self.k < cap);
        let mut t = w.to_vec();
        let a = self.k;
        for b in 0..a {
            let qb = &self.q[b * self.dim..(b + 1) * self.dim];
            let c = dot(qb, &t);
            self.r[b * cap + a] = c;
            t.iter_mut().zip(qb).for_each(|(x, q)| *x -= c * q);
        }
        let n = norm(&t);
        if n < RANK_TOL {
            for b in 0..a {
                self.r[b * cap + a] = 0.0;
            }
            return false;
        }
        self.r[a * cap + a] = n;
        self.q.extend(t.iter().map(|x| x / n));
        self.k += 1;
        true
    }

    /// Minimizer of `||v + W z||` over `z`, and the residual `v + W z`,
    /// which is `v` minus its projection onto the column span.
    fn least_squares(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let cap = self.cap();
        let k = self.k;
        let mut c = vec![0.0; k];
        let mut y = v.to_vec();
        for b in 0..k {
            let qb = &self.q[b * self.dim..(b + 1) * self.dim];
            c[b] = dot(qb, v);
            y.iter_mut().zip(qb).for_each(|(x, q)| *x -= c[b] * q);
        }
        if k == self.dim {
            // the columns span everything, so the residual is exactly zero
            y.iter_mut().for_each(|x| *x = 0.0);
        }
        // R z = -c
        let mut z = vec![0.0; k];
        for a in (0..k).rev() {
            let mut s = -c[a];
            for b in a + 1..k {
                s -= self.r[a * cap + b] * z[b];
            }
            z[a] = s / self.r[a * cap + a];
        }
        (z, y)
    }
}

/// Tries every linearly independent subset of at most `dim` representatives as
/// the active set. The projection has a KKT representation on such a subset,
/// so the feasible candidate closest to `v` is the projection.
fn enumerate_active_sets(
    v: &[f64],
    units: &UnitConstraints,
    reps: &[usize],
    tol: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let d = units.dim;
    let m = reps.len();
    let max_size = m.min(d);
    let mut best: Option<(f64, Vec<f64>, Vec<usize>, Vec<f64>)> = None;
    let mut qr = Qr::new(d, max_size);
    let mut subset: Vec<usize> = Vec::with_capacity(max_size);

    for size in 1..=max_size {
        // lexicographic combinations of `size` positions out of `m`
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            subset.clear();
            subset.extend(idx.iter().map(|&p| reps[p]));
            qr.clear();
            if subset.iter().all(|&k| qr.push(units.unit(k))) {
                let (lam, y) = qr.least_squares(v);
                let nonneg = lam.iter().all(|&l| l >= -tol);
                let feasible = reps.iter().all(|&k| dot(&y, units.unit(k)) >= -tol);
                if nonneg && feasible {
                    let dist2: f64 = y.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
                    let better = match &best {
                        None => true,
                        Some((bd, ..)) => dist2 < *bd * (1.0 - 1e-12) - 1e-300,
                    };
                    if better {
                        let lam = lam.into_iter().map(|l| l.max(0.0)).collect();
                        best = Some((dist2, y, subset.clone(), lam));
                    }
                }
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }

    best.map(|(_, y, subset, lam)| {
        // express multipliers over the representative list
        let mut lam_reps = vec![0.0; m];
        for (k, l) in subset.iter().zip(lam) {
            let pos = reps.iter().position(|r| r == k).expect("subset drawn from reps");
            lam_reps[pos] = l;
        }
        (y, lam_reps)
    })
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lawson-Hanson NNLS on the dual: minimize `||v + U lambda||` over
/// `lambda >= 0`. Its optimality conditions are exactly the KKT system of the
/// cone projection, with `v + U lambda` the projected vector.
fn lawson_hanson(
    v: &[f64],
    units: &UnitConstraints,
    cols: &[usize],
    opts: &ProjectionOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = units.dim;
    let m = cols.len();
    let mut lam = vec![0.0; m];
    let mut passive: Vec<usize> = Vec::new();
    let mut y = v.to_vec();
    let mut qr = Qr::new(d, d);
    let mut iterations = 0;

    let rebuild = |passive: &[usize], qr: &mut Qr| -> bool {
        qr.clear();
        passive.iter().all(|&p| qr.push(units.unit(cols[p])))
    };

    loop {
        // most violated constraint among those not in the passive set
        let mut pick: Option<(usize, f64)> = None;
        rebuild(&passive, &mut qr);
        for p in 0..m {
            if passive.contains(&p) {
                continue;
            }
            let g = dot(&y, units.unit(cols[p]));
            if g < -opts.tol && pick.is_none_or(|(_, gb)| g < gb) && passive.len() < d
                && qr.residual_norm(units.unit(cols[p])) > RANK_TOL {
                    pick = Some((p, g));
                }
        }
        let Some((enter, _)) = pick else {
            let residual = cols
                .iter()
                .map(|&k| -dot(&y, units.unit(k)) * units.norms[k])
                .fold(0.0, f64::max);
            if residual <= opts.tol {
                return Ok((y, lam));
            }
            return Err(Error::ProjectionDidNotConverge {
                iterations,
                residual,
                tol: opts.tol,
                constraints: m,
            });
        };
        passive.push(enter);

        loop {
            iterations += 1;
            if iterations > opts.max_iterations {
                let residual = cols
                    .iter()
                    .map(|&k| -dot(&y, units.unit(k)))
                    .fold(0.0, f64::max);
                return Err(Error::ProjectionDidNotConverge {
                    iterations,
                    residual,
                    tol: opts.tol,
                    constraints: m,
                });
            }
            let independent = rebuild(&passive, &mut qr);
            debug_assert!(independent);
            let (z, _) = qr.least_squares(v);
            if z.iter().all(|&zi| zi > 0.0) {
                for (&p, &zi) in passive.iter().zip(&z) {
                    lam[p] = zi;
                }
                break;
            }
            // step from lam toward z until the first passive variable hits zero
            let mut alpha = 1.0f64;
            for (&p, &zi) in passive.iter().zip(&z) {
                if zi <= 0.0 {
                    let a = lam[p] / (lam[p] - zi);
                    alpha = alpha.min(a);
                }
            }
            for (&p, &zi) in passive.iter().zip(&z) {
                lam[p] += alpha * (zi - lam[p]);
            }
            passive.retain(|&p| {
                if lam[p] <= 1e-15 {
                    lam[p] = 0.0;
                    false
                } else {
                    true
                }
            });
            if passive.is_empty() {
                break;
            }
        }

        y.copy_from_slice(v);
        for (p, &l) in lam.iter().enumerate() {
            if l != 0.0 {
                let u = units.unit(cols[p]);
                y.iter_mut().zip(u).for_each(|(a, b)| *a += l * b);
            }
        }
        if passive.len() == d {
            y.iter_mut().for_each(|a| *a = 0.0);
        }
    }
}

/// Dykstra's alternating projections onto the half-spaces `<y, u_k> >= 0`.
/// The increments of each half-space converge to `-lambda_k u_k`.
fn dykstra(
    v: &[f64],
    units: &UnitConstraints,
    cols: &[usize],
    opts: &ProjectionOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = units.dim;
    let m = cols.len();
    let mut x = v.to_vec();
    // increment of half-space k is -mu[k] * u_k
    let mut mu = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        for (k, &c) in cols.iter().enumerate() {
            let u = units.unit(c);
            // y = x + p_k = x - mu_k u
            let g = dot(&x, u) - mu[k];
            let new_mu = (-g).max(0.0);
            let delta = new_mu - mu[k];
            if delta != 0.0 {
                for i in 0..d {
                    x[i] += delta * u[i];
                }
            }
            mu[k] = new_mu;
        }
        let mut feas: f64 = 0.0;
        let mut comp: f64 = 0.0;
        for (k, &c) in cols.iter().enumerate() {
            let g = dot(&x, units.unit(c));
            // feasibility is reported against the unnormalized constraint
            feas = feas.max(-g * units.norms[c]);
            comp = comp.max((mu[k] * g).abs());
        }
        residual = feas.max(comp);
        if residual <= opts.tol {
            return Ok((x, mu));
        }
    }
    Err(Error::ProjectionDidNotConverge {
        iterations: opts.max_iterations,
        residual,
        tol: opts.tol,
        constraints: m,
    })
}

/// Whether `query` lies in the convex hull of `points` inflated by `eps`.
pub fn hull_contains_2d(points: &[[f64; 2]], query: [f64; 2], eps: f64) -> bool {
    assert!(!points.is_empty(), "hull of an empty point set");
    let hull = convex_hull_2d(points);
    match hull.len() {
        1 => dist2(hull[0], query).sqrt() <= eps,
        2 => segment_distance(hull[0], hull[1], query) <= eps,
        _ => {
            let n = hull.len();
            let inside = (0..n).all(|k| cross(hull[k], hull[(k + 1) % n], query) >= 0.0);
            inside
                || (0..n)
                    .map(|k| segment_distance(hull[k], hull[(k + 1) % n], query))
                    .fold(f64::INFINITY, f64::min)
                    <= eps
        }
    }
}

/// Convex hull in counterclockwise order (Andrew's monotone chain). Collinear
/// points are dropped; a degenerate set yields its one or two extreme points.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist2(a, p).sqrt();
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist2([a[0] + t * ab[0], a[1] + t * ab[1]], p).sqrt()
}

/// Componentwise minimum and maximum corners.
pub fn bounding_box<'a, I>(points: I) -> Option<(Vec<f64>, Vec<f64>)>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut iter = points.into_iter();
    let first = iter.next()?;
    let mut lo = first.to_vec();
    let mut hi = first.to_vec();
    for p in iter {
        for (k, &x) in p.iter().enumerate() {
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    Some((lo, hi))
}

/// Whether box `inner` lies inside box `outer` up to `eps` per coordinate.
pub fn box_contains(outer: &(Vec<f64>, Vec<f64>), inner: &(Vec<f64>, Vec<f64>), eps: f64) -> bool {
    outer.0.iter().zip(&inner.0).all(|(o, i)| *i >= o - eps)
        && outer.1.iter().zip(&inner.1).all(|(o, i)| *i <= o + eps)
}
