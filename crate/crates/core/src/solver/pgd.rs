use std::time::Instant;

use nalgebra::DVector;

use super::{datafit_value_grad, lipschitz_estimate, ProblemInstance, SolverOptions, SolverOutput, SolverTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::prox::{prox, SortedPenalty};

/// `0.99 * min(1/L, 1/mu)` for weakly convex penalties, `0.99 / L` otherwise.
pub fn default_stepsize(instance: &ProblemInstance) -> f64 {
    let l = lipschitz_estimate(instance);
    let mu = instance.penalty.weak_convexity_modulus();
    let inv_l = if l > 0.0 { 1.0 / l } else { f64::INFINITY };
    let bound = if mu.is_finite() && mu > 0.0 { inv_l.min(1.0 / mu) } else { inv_l };
    if bound.is_finite() {
        0.99 * bound
    } else {
        1.0
    }
}

pub(crate) struct Recorder {
    start: Instant,
    pub trace: SolverTrace,
}

impl Recorder {
    pub fn new() -> Self {
        Recorder { start: Instant::now(), trace: SolverTrace::default() }
    }

    /// Appends a record, failing on a non-finite objective.
    pub fn record(&mut self, iteration: usize, parts: (f64, f64, f64)) -> Result<f64> {
        let (objective, datafit, penalty) = parts;
        self.trace.records.push(TraceRecord {
            iteration,
            objective,
            datafit,
            penalty,
            elapsed: self.start.elapsed(),
        });
        if !objective.is_finite() {
            return Err(Error::Divergence {
                iteration,
                trace: Box::new(std::mem::take(&mut self.trace)),
            });
        }
        Ok(objective)
    }
}

pub(crate) fn check_options(instance: &ProblemInstance, opts: &SolverOptions) -> Result<(f64, DVector<f64>)> {
    let eta = opts.eta.unwrap_or_else(|| default_stepsize(instance));
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidParameter(format!("stepsize must be positive, got {eta}")));
    }
    let x0 = opts.x0.clone().unwrap_or_else(|| DVector::zeros(instance.dim()));
    if x0.len() != instance.dim() {
        return Err(Error::DimensionMismatch { expected: instance.dim(), got: x0.len() });
    }
    Ok((eta, x0))
}

fn prox_step(instance: &ProblemInstance, penalty: &SortedPenalty, x: &DVector<f64>, eta: f64) -> Result<DVector<f64>> {
    let (_, grad) = datafit_value_grad(instance, x);
    let z = x - grad * eta;
    Ok(DVector::from_vec(prox(penalty, z.as_slice())?.x))
}

/// `|x - prox(x - eta grad g(x))|`.
pub fn fixed_point_residual(instance: &ProblemInstance, x: &DVector<f64>, eta: f64) -> Result<f64> {
    let penalty = instance.penalty.with_eta(eta)?;
    Ok((x - prox_step(instance, &penalty, x, eta)?).norm())
}

/// Proximal gradient descent, optionally accelerated.
pub fn pgd(instance: &ProblemInstance, opts: &SolverOptions) -> Result<SolverOutput> {
    let (eta, mut x) = check_options(instance, opts)?;
    let penalty = instance.penalty.with_eta(eta)?;
    let mut rec = Recorder::new();
    let mut f_prev = rec.record(0, instance.objective(&x))?;
    let mut converged = false;
    let mut iterations = 0;
    // momentum state
    let mut y = x.clone();
    let mut t = 1.0f64;
    for k in 1..=opts.max_iter {
        iterations = k;
        let mut next = prox_step(instance, &penalty, if opts.accelerated { &y } else { &x }, eta)?;
        let mut parts = instance.objective(&next);
        if opts.accelerated {
            if parts.0 > f_prev {
                // restart from the last iterate
                t = 1.0;
                next = prox_step(instance, &penalty, &x, eta)?;
                parts = instance.objective(&next);
            }
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = &next + (&next - &x) * ((t - 1.0) / t_next);
            t = t_next;
        }
        let f = rec.record(k, parts)?;
        x = next;
        let done = (f_prev - f).abs() < opts.tol;
        f_prev = f;
        if done {
            converged = true;
            break;
        }
    }
    Ok(SolverOutput { x, trace: rec.trace, iterations, converged, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltyFamily;
    use crate::solver::Datafit;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    #[test]
    fn unpenalized_least_squares_solves_the_system() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.3, 1.5, -0.2, 0.0, 0.4, 1.0]);
        let b = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let pen = SortedPenalty::new(PenaltyFamily::L1, vec![0.0; 3], 1.0).unwrap();
        let inst = ProblemInstance::new(a.clone(), b.clone(), Datafit::LeastSquares, pen).unwrap();
        let opts = SolverOptions { tol: 1e-24, max_iter: 100_000, ..Default::default() };
        let out = pgd(&inst, &opts).unwrap();
        let exact = a.lu().solve(&b).unwrap();
        assert!((out.x - exact).norm() < 1e-6);
    }

    #[test]
    fn divergence_is_reported() {
        let a = DMatrix::from_element(2, 2, 1e200);
        let b = DVector::from_element(2, 1e200);
        let pen = SortedPenalty::new(PenaltyFamily::L1, vec![0.0; 2], 1.0).unwrap();
        let inst = ProblemInstance::new(a, b, Datafit::LeastSquares, pen).unwrap();
        let opts = SolverOptions { eta: Some(1.0), ..Default::default() };
        match pgd(&inst, &opts) {
            Err(Error::Divergence { trace, .. }) => assert!(!trace.records.is_empty()),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn default_step_respects_both_bounds() {
        let a = DMatrix::identity(2, 2) * 0.5;
        let pen = SortedPenalty::new(PenaltyFamily::Mcp { gamma: 2.0 }, vec![1.0, 0.5], 1.0).unwrap();
        let inst = ProblemInstance::new(a, DVector::zeros(2), Datafit::LeastSquares, pen).unwrap();
        assert_abs_diff_eq!(default_stepsize(&inst), 0.99 * 2.0, epsilon = 1e-9);
    }
}
