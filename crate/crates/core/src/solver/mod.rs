//! Composite problems `g(x) + Psi(x)` with a smooth datafit `g` and a sorted
//! penalty `Psi`, solved by proximal gradient descent or by the
//! majorization-minimization baseline for sorted MCP.

mod datafit;
mod mm;
mod pgd;

use std::time::Duration;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::prox::SortedPenalty;

pub use datafit::{datafit_value_grad, lipschitz_estimate};
pub use mm::{mm_lca_smcp, prox_mcp_convex_part};
pub use pgd::{default_stepsize, fixed_point_residual, pgd};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Datafit {
    /// `1/2 |Ax - b|^2`
    LeastSquares,
    /// `1/n sum_i log(1 + exp(-b_i (Ax)_i))`, labels in `{-1, +1}`
    Logistic,
}

/// Design, target, datafit and penalty of a composite problem. The stepsize
/// stored in the penalty is ignored by the solvers.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub datafit: Datafit,
    pub penalty: SortedPenalty,
}

impl ProblemInstance {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, datafit: Datafit, penalty: SortedPenalty) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.len() });
        }
        if a.ncols() != penalty.dim() {
            return Err(Error::DimensionMismatch { expected: a.ncols(), got: penalty.dim() });
        }
        if datafit == Datafit::Logistic && b.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(Error::InvalidParameter("logistic labels must be -1 or +1".into()));
        }
        Ok(ProblemInstance { a, b, datafit, penalty })
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    /// `(g(x) + Psi(x), g(x), Psi(x))`.
    pub fn objective(&self, x: &DVector<f64>) -> (f64, f64, f64) {
        let (g, _) = datafit_value_grad(self, x);
        let pen = self.penalty.value(x.as_slice());
        (g + pen, g, pen)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub objective: f64,
    pub datafit: f64,
    pub penalty: f64,
    pub elapsed: Duration,
}

/// Per-iteration history; record 0 is the starting point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn objectives(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.objective).collect()
    }

    pub fn last_objective(&self) -> Option<f64> {
        self.records.last().map(|r| r.objective)
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Stepsize; [`default_stepsize`] when `None`.
    pub eta: Option<f64>,
    pub max_iter: usize,
    /// Stop once two successive objectives differ by less than this.
    pub tol: f64,
    /// FISTA momentum with restart when the objective increases.
    pub accelerated: bool,
    /// Starting point; zero when `None`.
    pub x0: Option<DVector<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eta: None,
            max_iter: 10_000,
            tol: 1e-5,
            accelerated: false,
            x0: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub x: DVector<f64>,
    pub trace: SolverTrace,
    /// Number of iterations performed.
    pub iterations: usize,
    /// Whether the objective-difference criterion was met.
    pub converged: bool,
    pub eta: f64,
}
