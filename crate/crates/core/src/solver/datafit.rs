use nalgebra::{DMatrix, DVector};

use super::{Datafit, ProblemInstance};

/// Value and gradient of the datafit at `x`.
pub fn datafit_value_grad(instance: &ProblemInstance, x: &DVector<f64>) -> (f64, DVector<f64>) {
    let a = &instance.a;
    let b = &instance.b;
    let ax = a * x;
    match instance.datafit {
        Datafit::LeastSquares => {
            let r = ax - b;
            (0.5 * r.norm_squared(), a.tr_mul(&r))
        }
        Datafit::Logistic => {
            let n = b.len() as f64;
            let mut value = 0.0;
            let mut w = DVector::zeros(b.len());
            for i in 0..b.len() {
                let t = b[i] * ax[i];
                // log(1 + exp(-t)) without overflow
                value += (-t).max(0.0) + (-t.abs()).exp().ln_1p();
                w[i] = -b[i] * sigmoid(-t) / n;
            }
            (value / n, a.tr_mul(&w))
        }
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Iteration cap of the power method; it usually stops far earlier on the
/// relative-change test.
const POWER_ITERATIONS: usize = 1000;

/// Largest squared singular value of `a` by power iteration on `a^T a`.
pub(crate) fn spectral_norm_squared(a: &DMatrix<f64>) -> f64 {
    let p = a.ncols();
    if p == 0 || a.nrows() == 0 {
        return 0.0;
    }
    // fixed, non-uniform start so that symmetric designs are not missed
    let mut v = DVector::from_fn(p, |i, _| 1.0 + (i as f64 + 1.0).sqrt() / p as f64);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = a.tr_mul(&(a * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w);
        v = w / norm;
        let converged = (next - estimate).abs() <= 1e-10 * next.abs();
        estimate = next;
        if converged {
            break;
        }
    }
    // Rayleigh quotient at the final vector
    (a * &v).norm_squared().max(estimate)
}

/// Lipschitz constant of the datafit gradient.
pub fn lipschitz_estimate(instance: &ProblemInstance) -> f64 {
    let s = spectral_norm_squared(&instance.a);
    match instance.datafit {
        Datafit::LeastSquares => s,
        Datafit::Logistic => s / (4.0 * instance.b.len() as f64),
    }
}
