use nalgebra::DVector;

use super::pgd::{check_options, Recorder};
use super::{datafit_value_grad, ProblemInstance, SolverOptions, SolverOutput};
use crate::error::{Error, Result};
use crate::isotonic::{pav, PoolingRule};
use crate::penalty::PenaltyFamily;
use crate::prox::{reduce, restore};

/// Prox of `eta * sum_i phi(|y|_(i); lam_i)` with the convex function
/// `phi(z; lam) = mcp(z; lam, gamma) + z^2 / (2 gamma)`.
pub fn prox_mcp_convex_part(gamma: f64, lams: &[f64], eta: f64, y: &[f64]) -> Result<Vec<f64>> {
    let rule = PoolingRule::mcp_convex_part(gamma, eta)?;
    let red = reduce(y)?;
    let part = pav(&red.y_sorted, lams, rule)?;
    restore(&red.signs, &red.perm, &part.flatten())
}

/// Majorization-minimization for sorted MCP. The penalty is split as
/// `Psi = Psi_plus - |x|^2 / (2 gamma)` with `Psi_plus` convex; the concave
/// part is linearized at the current iterate and one proximal gradient step
/// is taken on the surrogate per outer iteration. The trace reports the
/// original objective.
pub fn mm_lca_smcp(instance: &ProblemInstance, opts: &SolverOptions) -> Result<SolverOutput> {
    let gamma = match instance.penalty.family() {
        PenaltyFamily::Mcp { gamma } => gamma,
        other => {
            return Err(Error::UnsupportedFamily { op: "mm_lca_smcp", family: other.to_string() });
        }
    };
    let (eta, mut x) = check_options(instance, opts)?;
    let lams = instance.penalty.lams();
    let mut rec = Recorder::new();
    let mut f_prev = rec.record(0, instance.objective(&x))?;
    let mut converged = false;
    let mut iterations = 0;
    for k in 1..=opts.max_iter {
        iterations = k;
        let (_, grad) = datafit_value_grad(instance, &x);
        let z: DVector<f64> = &x - (grad - &x / gamma) * eta;
        x = DVector::from_vec(prox_mcp_convex_part(gamma, lams, eta, z.as_slice())?);
        let f = rec.record(k, instance.objective(&x))?;
        let done = (f_prev - f).abs() < opts.tol;
        f_prev = f;
        if done {
            converged = true;
            break;
        }
    }
    Ok(SolverOutput { x, trace: rec.trace, iterations, converged, eta })
}
