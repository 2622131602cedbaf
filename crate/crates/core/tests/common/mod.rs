//! Independent oracles shared by the integration and acceptance tests.

use nalgebra::{DMatrix, DVector};
use nolb::configuration::dot;

/// Best feasible candidate over every active subset: the projection of `v`
/// onto `{y : <y, u_k> = 0, k in S}`, kept when feasible and, for independent
/// subsets, when its multipliers are nonnegative.
pub fn brute_force(v: &[f64], constraints: &[Vec<f64>]) -> Vec<f64> {
    let d = v.len();
    let m = constraints.len();
    let x = DVector::from_column_slice(v);
    let mut best: Option<(f64, DVector<f64>)> = None;
    for mask in 0u32..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|k| mask & (1 << k) != 0).collect();
        let y = if subset.is_empty() {
            x.clone()
        } else {
            let u = DMatrix::from_fn(d, subset.len(), |r, c| constraints[subset[c]][r]);
            let gram = u.transpose() * &u;
            let pinv = gram.clone().pseudo_inverse(1e-13).unwrap();
            let lambda = -(&pinv * (u.transpose() * &x));
            let rank = gram.rank(1e-13);
            if rank == subset.len() && lambda.iter().any(|&l| l < -1e-10) {
                continue;
            }
            if rank == d {
                // the active constraints pin the candidate to the origin
                DVector::zeros(d)
            } else {
                &x + &u * lambda
            }
        };
        if constraints.iter().any(|c| dot(y.as_slice(), c) < -1e-10) {
            continue;
        }
        let dist = (&y - &x).norm();
        if best.as_ref().is_none_or(|(b, _)| dist < *b) {
            best = Some((dist, y));
        }
    }
    best.expect("the origin is always a feasible candidate").1.as_slice().to_vec()
}
