//! Brute-force references for the fast paths: dense-grid scalar prox,
//! exhaustive search over contiguous partitions for small `p`, a dense 2-D
//! grid for the vector prox and finite-difference derivative checks.
//!
//! Nothing here calls the pooling rules or the thresholds of
//! [`PenaltyFamily`]; block values are found from the block derivative with
//! plain golden-section search and bisection.

use crate::error::{Error, Result};
use crate::penalty::PenaltyFamily;

/// Largest dimension accepted by [`exhaustive_partition_prox`].
pub const MAX_EXHAUSTIVE_DIM: usize = 12;

/// Minimum of a brute-force search, optionally compared with a candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub objective: f64,
    pub argmin: Vec<f64>,
    /// Candidate objective minus oracle objective.
    pub gap_vs_candidate: Option<f64>,
    /// Number of feasible assignments evaluated.
    pub instances_checked: usize,
}

impl OracleReport {
    pub fn with_candidate(mut self, candidate_objective: f64) -> Self {
        self.gap_vs_candidate = Some(candidate_objective - self.objective);
        self
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[a, b]` down to width `tol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}

/// Scalar prox by grid search over `{0, step, ..., z_max}` followed by a
/// golden-section refinement around the best grid point. Returns
/// `(argmin, objective)`.
pub fn grid_scalar_prox(family: PenaltyFamily, y: f64, lam: f64, z_max: f64, step: f64) -> (f64, f64) {
    let f = |z: f64| 0.5 * (z - y) * (z - y) + family.psi(z, lam);
    let n = (z_max / step).floor() as usize;
    let (mut best_z, mut best_f) = (0.0, f(0.0));
    for i in 1..=n {
        let z = i as f64 * step;
        let v = f(z);
        if v < best_f {
            best_z = z;
            best_f = v;
        }
    }
    let lo = (best_z - step).max(0.0);
    let hi = (best_z + step).min(z_max);
    let z = golden_section(f, lo, hi, step / 1000.0);
    let fz = f(z);
    if fz < best_f {
        (z, fz)
    } else {
        (best_z, best_f)
    }
}

/// Candidate values `{0}` plus, when it exists, the largest root of the
/// derivative of `z -> sum_i [ (z - y_i)^2 / (2 eta) + psi(z; lam_i) ]` on
/// `(0, ybar]`.
fn block_candidates(family: PenaltyFamily, lams: &[f64], ybar: f64, eta: f64) -> Vec<f64> {
    let n = lams.len() as f64;
    if ybar <= 0.0 {
        return vec![0.0];
    }
    let deriv = |z: f64| n / eta * (z - ybar) + lams.iter().map(|&l| family.dpsi(z, l)).sum::<f64>();
    let zmin = golden_section(deriv, 0.0, ybar, 1e-15 * ybar.max(1.0));
    let mut out = vec![0.0];
    let (mut lo, mut hi) = (zmin, ybar);
    if deriv(lo) >= 0.0 {
        return out;
    }
    if deriv(hi) <= 0.0 {
        out.push(hi);
        return out;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if deriv(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.push(0.5 * (lo + hi));
    out
}

/// Global minimizer of `sum_i psi(x_i; lam_i) + |x - y|^2 / (2 eta)` over
/// non-increasing nonnegative `x`, by enumerating every contiguous partition
/// of `0..p` and, per block, every value in `{0, nonzero stationary point}`.
pub fn exhaustive_partition_prox(
    family: PenaltyFamily,
    lams: &[f64],
    y_sorted: &[f64],
    eta: f64,
) -> Result<OracleReport> {
    let p = y_sorted.len();
    if p > MAX_EXHAUSTIVE_DIM {
        return Err(Error::Size(format!(
            "exhaustive oracle supports p <= {MAX_EXHAUSTIVE_DIM}, got {p}"
        )));
    }
    if lams.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: lams.len() });
    }
    family.validate()?;
    if p == 0 {
        return Ok(OracleReport {
            objective: 0.0,
            argmin: Vec::new(),
            gap_vs_candidate: None,
            instances_checked: 1,
        });
    }
    // nonzero candidate of every range a..=b
    let mut nonzero = vec![vec![None; p]; p];
    for a in 0..p {
        for b in a..p {
            let ybar = y_sorted[a..=b].iter().sum::<f64>() / (b - a + 1) as f64;
            let cands = block_candidates(family, &lams[a..=b], ybar, eta);
            nonzero[a][b] = cands.get(1).copied();
        }
    }
    let objective = |x: &[f64]| -> f64 {
        x.iter()
            .zip(y_sorted)
            .zip(lams)
            .map(|((&xi, &yi), &l)| family.psi(xi, l) + 0.5 * (xi - yi) * (xi - yi) / eta)
            .sum()
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut checked = 0usize;
    let mut x = vec![0.0; p];
    // bit i of mask set: a block ends after index i
    for mask in 0u32..(1u32 << (p - 1)) {
        let mut ranges = Vec::with_capacity(p);
        let mut start = 0;
        for i in 0..p {
            if i == p - 1 || mask & (1 << i) != 0 {
                ranges.push((start, i));
                start = i + 1;
            }
        }
        // blocks before `zero_from` take their nonzero value, the rest are 0
        for zero_from in 0..=ranges.len() {
            let mut feasible = true;
            let mut prev = f64::INFINITY;
            for (k, &(a, b)) in ranges.iter().enumerate() {
                let v = if k < zero_from {
                    match nonzero[a][b] {
                        Some(v) if v <= prev => v,
                        _ => {
                            feasible = false;
                            break;
                        }
                    }
                } else {
                    0.0
                };
                x[a..=b].fill(v);
                prev = v;
            }
            if !feasible {
                continue;
            }
            checked += 1;
            let obj = objective(&x);
            if best.as_ref().is_none_or(|(o, _)| obj < *o) {
                best = Some((obj, x.clone()));
            }
        }
    }
    let (objective, argmin) = best.expect("the all-zero assignment is always feasible");
    Ok(OracleReport {
        objective,
        argmin,
        gap_vs_candidate: None,
        instances_checked: checked,
    })
}

/// Prox of `eta * Psi` in dimension 2 by dense grid search over
/// `[-radius, radius]^2` with `n` points per axis (plus a local golden
/// refinement along each axis). Returns `(argmin, objective)`.
pub fn grid_prox_2d(
    family: PenaltyFamily,
    lams: [f64; 2],
    eta: f64,
    y: [f64; 2],
    radius: f64,
    n: usize,
) -> ([f64; 2], f64) {
    let f = |x: [f64; 2]| {
        let (a, b) = (x[0].abs(), x[1].abs());
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        family.psi(hi, lams[0])
            + family.psi(lo, lams[1])
            + 0.5 * ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)) / eta
    };
    let step = 2.0 * radius / (n - 1) as f64;
    let coord = |i: usize| -radius + i as f64 * step;
    let mut best = ([0.0, 0.0], f([0.0, 0.0]));
    for i in 0..n {
        for j in 0..n {
            let x = [coord(i), coord(j)];
            let v = f(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    // coordinate-wise refinement inside the winning cell
    let mut x = best.0;
    for _ in 0..3 {
        for k in 0..2 {
            let base = x;
            let g = |t: f64| {
                let mut z = base;
                z[k] = t;
                f(z)
            };
            let t = golden_section(g, base[k] - step, base[k] + step, step * 1e-6);
            for cand in [t, 0.0] {
                if (cand - base[k]).abs() <= step && g(cand) < f(x) {
                    x[k] = cand;
                }
            }
        }
    }
    let fx = f(x);
    if fx < best.1 {
        (x, fx)
    } else {
        best
    }
}

/// Relative error `|df(z) - (f(z + h) - f(z - h)) / (2h)| / max(1, |df(z)|)`.
pub fn finite_diff_check(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    let exact = df(z);
    let central = (f(z + h) - f(z - h)) / (2.0 * h);
    (exact - central).abs() / exact.abs().max(1.0)
}
