//! Scalar penalty calculus.
//!
//! Every penalty here is a function `psi(z; lam)` of a magnitude `z >= 0` and a
//! regularization level `lam >= 0`. It is continuous, non-decreasing and
//! concave in `z`, with `psi(0; lam) = 0`. The log-sum and lq families are
//! additionally *scaled*, `psi(z; lam) = lam * psi0(z)`, with `psi0''`
//! increasing and vanishing at infinity. For those two families the scalar
//! prox objective
//!
//! ```text
//! F(z) = 1/2 (z - y)^2 + lam * psi0(z),   z >= 0
//! ```
//!
//! is concave on `[0, m(lam)]` and convex afterwards, has at most two local
//! minimizers (0 and a nonzero one) and its global minimizer jumps from 0 to
//! the nonzero branch at a threshold `T(lam)`.
//!
//! Stepsizes are never handled here: callers pass the effective level
//! `eta * lam`.

use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance for the nonzero stationary point root-finder.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Absolute tolerance for the bisection defining the log-sum global threshold.
pub const THRESHOLD_ABS_TOL: f64 = 1e-12;

/// A scalar penalty family with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenaltyFamily {
    /// `lam * z`; sorted, this is SLOPE.
    L1,
    /// Minimax concave penalty, `gamma > 0`.
    Mcp { gamma: f64 },
    /// Smoothly clipped absolute deviation (Fan and Li), `gamma > 2`.
    Scad { gamma: f64 },
    /// `lam * log(1 + z / eps)`, `eps > 0`.
    LogSum { eps: f64 },
    /// `lam * z^q`, `0 < q < 1`.
    Lq { q: f64 },
}

impl fmt::Display for PenaltyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PenaltyFamily::L1 => write!(f, "l1"),
            PenaltyFamily::Mcp { gamma } => write!(f, "mcp(gamma={gamma})"),
            PenaltyFamily::Scad { gamma } => write!(f, "scad(gamma={gamma})"),
            PenaltyFamily::LogSum { eps } => write!(f, "logsum(eps={eps})"),
            PenaltyFamily::Lq { q } => write!(f, "lq(q={q})"),
        }
    }
}

/// Outcome of the scalar proximal operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProxResult {
    pub value: f64,
    /// True iff 0 and the nonzero branch are both global minimizers and the
    /// nonzero one was returned.
    pub tied: bool,
    pub objective: f64,
}

impl PenaltyFamily {
    pub fn mcp(gamma: f64) -> Result<Self> {
        let family = PenaltyFamily::Mcp { gamma };
        family.validate()?;
        Ok(family)
    }

    pub fn scad(gamma: f64) -> Result<Self> {
        let family = PenaltyFamily::Scad { gamma };
        family.validate()?;
        Ok(family)
    }

    pub fn log_sum(eps: f64) -> Result<Self> {
        let family = PenaltyFamily::LogSum { eps };
        family.validate()?;
        Ok(family)
    }

    pub fn lq(q: f64) -> Result<Self> {
        let family = PenaltyFamily::Lq { q };
        family.validate()?;
        Ok(family)
    }

    /// Checks the shape parameter.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PenaltyFamily::L1 => true,
            PenaltyFamily::Mcp { gamma } => gamma.is_finite() && gamma > 0.0,
            PenaltyFamily::Scad { gamma } => gamma.is_finite() && gamma > 2.0,
            PenaltyFamily::LogSum { eps } => eps.is_finite() && eps > 0.0,
            PenaltyFamily::Lq { q } => q > 0.0 && q < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self}")))
        }
    }

    /// Whether `psi(z; lam) = lam * psi0(z)`.
    pub fn is_scaled(&self) -> bool {
        matches!(
            self,
            PenaltyFamily::L1 | PenaltyFamily::LogSum { .. } | PenaltyFamily::Lq { .. }
        )
    }

    /// Families whose scalar objective has the concave-then-convex profile
    /// analysed by the thresholds `m`, `tau`, `T` (log-sum and lq).
    pub fn has_threshold_structure(&self) -> bool {
        matches!(self, PenaltyFamily::LogSum { .. } | PenaltyFamily::Lq { .. })
    }

    fn require_threshold_structure(&self, op: &'static str) -> Result<()> {
        if self.has_threshold_structure() {
            Ok(())
        } else {
            Err(Error::UnsupportedFamily {
                op,
                family: self.to_string(),
            })
        }
    }

    /// Points of `(0, inf)` where the second derivative is undefined.
    pub fn nondiff_points(&self, lam: f64) -> Vec<f64> {
        match *self {
            PenaltyFamily::Mcp { gamma } => vec![gamma * lam],
            PenaltyFamily::Scad { gamma } => vec![lam, gamma * lam],
            _ => Vec::new(),
        }
    }

    /// `psi(z; lam)` for `z >= 0`.
    pub fn psi(&self, z: f64, lam: f64) -> f64 {
        debug_assert!(z >= 0.0 && lam >= 0.0);
        match *self {
            PenaltyFamily::L1 => lam * z,
            PenaltyFamily::Mcp { gamma } => {
                if z <= gamma * lam {
                    lam * z - z * z / (2.0 * gamma)
                } else {
                    0.5 * lam * lam * gamma
                }
            }
            PenaltyFamily::Scad { gamma } => {
                if z <= lam {
                    lam * z
                } else if z <= gamma * lam {
                    (2.0 * gamma * lam * z - z * z - lam * lam) / (2.0 * (gamma - 1.0))
                } else {
                    0.5 * lam * lam * (gamma + 1.0)
                }
            }
            PenaltyFamily::LogSum { eps } => lam * (z / eps).ln_1p(),
            PenaltyFamily::Lq { q } => {
                if z == 0.0 {
                    0.0
                } else {
                    lam * z.powf(q)
                }
            }
        }
    }

    /// First derivative in `z`, for `z > 0`.
    pub fn psi_prime(&self, z: f64, lam: f64) -> Result<f64> {
        if z.is_nan() || z <= 0.0 {
            return Err(Error::Domain(format!("psi_prime needs z > 0, got {z}")));
        }
        Ok(self.dpsi(z, lam))
    }

    pub(crate) fn dpsi(&self, z: f64, lam: f64) -> f64 {
        match *self {
            PenaltyFamily::L1 => lam,
            PenaltyFamily::Mcp { gamma } => (lam - z / gamma).max(0.0),
            PenaltyFamily::Scad { gamma } => {
                if z <= lam {
                    lam
                } else {
                    ((gamma * lam - z) / (gamma - 1.0)).max(0.0)
                }
            }
            PenaltyFamily::LogSum { eps } => lam / (eps + z),
            PenaltyFamily::Lq { q } => lam * q * z.powf(q - 1.0),
        }
    }

    /// Limit of the first derivative as `z -> 0+`; infinite for lq.
    pub fn psi_prime_at_zero(&self, lam: f64) -> f64 {
        if lam == 0.0 {
            return 0.0;
        }
        match *self {
            PenaltyFamily::L1 | PenaltyFamily::Mcp { .. } | PenaltyFamily::Scad { .. } => lam,
            PenaltyFamily::LogSum { eps } => lam / eps,
            PenaltyFamily::Lq { .. } => f64::INFINITY,
        }
    }

    /// Second derivative in `z` for `z > 0`. At a point of
    /// [`nondiff_points`](Self::nondiff_points) the right limit is returned.
    pub fn psi_second(&self, z: f64, lam: f64) -> f64 {
        match *self {
            PenaltyFamily::L1 => 0.0,
            PenaltyFamily::Mcp { gamma } => {
                if z < gamma * lam {
                    -1.0 / gamma
                } else {
                    0.0
                }
            }
            PenaltyFamily::Scad { gamma } => {
                if z >= lam && z < gamma * lam {
                    -1.0 / (gamma - 1.0)
                } else {
                    0.0
                }
            }
            PenaltyFamily::LogSum { eps } => -lam / ((eps + z) * (eps + z)),
            PenaltyFamily::Lq { q } => lam * q * (q - 1.0) * z.powf(q - 2.0),
        }
    }

    /// `mu` such that `psi(.; lam) + mu/2 (.)^2` is convex for every
    /// `lam <= lam_max`. Infinite for lq.
    pub fn weak_convexity_modulus(&self, lam_max: f64) -> f64 {
        match *self {
            PenaltyFamily::L1 => 0.0,
            PenaltyFamily::Mcp { gamma } => 1.0 / gamma,
            PenaltyFamily::Scad { gamma } => 1.0 / (gamma - 1.0),
            PenaltyFamily::LogSum { eps } => lam_max / (eps * eps),
            PenaltyFamily::Lq { .. } => f64::INFINITY,
        }
    }

    /// Scalar prox objective `1/2 (z - y)^2 + psi(z; lam)`.
    pub fn scalar_objective(&self, z: f64, y: f64, lam: f64) -> f64 {
        0.5 * (z - y) * (z - y) + self.psi(z, lam)
    }

    /// Boundary `m(lam)` between the concave and convex parts of the scalar
    /// objective.
    pub fn concavity_boundary(&self, lam: f64) -> Result<f64> {
        self.require_threshold_structure("concavity_boundary")?;
        Ok(self.concavity_boundary_unchecked(lam))
    }

    fn concavity_boundary_unchecked(&self, lam: f64) -> f64 {
        if lam <= 0.0 {
            return 0.0;
        }
        match *self {
            PenaltyFamily::Lq { q } => (lam * q * (1.0 - q)).powf(1.0 / (2.0 - q)),
            PenaltyFamily::LogSum { eps } => (lam.sqrt() - eps).max(0.0),
            _ => unreachable!(),
        }
    }

    /// Threshold `tau(lam)` below which 0 is the only local minimizer of the
    /// scalar objective. Computed as `m + lam * psi0'(m)`; at `m = 0` the
    /// derivative is the limit at zero.
    pub fn local_threshold(&self, lam: f64) -> Result<f64> {
        self.require_threshold_structure("local_threshold")?;
        Ok(self.local_threshold_unchecked(lam))
    }

    fn local_threshold_unchecked(&self, lam: f64) -> f64 {
        if lam <= 0.0 {
            return 0.0;
        }
        match *self {
            PenaltyFamily::Lq { q } => {
                (2.0 - q) / (1.0 - q) * (lam * q * (1.0 - q)).powf(1.0 / (2.0 - q))
            }
            PenaltyFamily::LogSum { eps } => {
                let root = lam.sqrt();
                if root > eps {
                    2.0 * root - eps
                } else {
                    lam / eps
                }
            }
            _ => unreachable!(),
        }
    }

    /// Whether the scalar objective at level `lam` has two distinct local
    /// minimizer branches (false in the convex regime of log-sum).
    pub fn is_nonconvex_at(&self, lam: f64) -> bool {
        match *self {
            PenaltyFamily::Lq { .. } => lam > 0.0,
            PenaltyFamily::LogSum { eps } => lam > eps * eps,
            _ => false,
        }
    }

    /// Threshold `T(lam)` where the global scalar minimizer jumps from 0 to
    /// the nonzero branch.
    pub fn global_threshold(&self, lam: f64) -> Result<f64> {
        self.require_threshold_structure("global_threshold")?;
        if lam <= 0.0 {
            return Ok(0.0);
        }
        match *self {
            PenaltyFamily::Lq { q } => {
                Ok(0.5 * (2.0 - q) / (1.0 - q) * (2.0 * lam * (1.0 - q)).powf(1.0 / (2.0 - q)))
            }
            PenaltyFamily::LogSum { eps } => {
                let tau = self.local_threshold_unchecked(lam);
                let upper = lam / eps;
                if !self.is_nonconvex_at(lam) || tau >= upper {
                    return Ok(upper);
                }
                // F(0) - F(rho(y)) is increasing in y, negative at tau.
                let gap = |y: f64| {
                    let rho = self.nonzero_minimizer_unchecked(y, lam);
                    0.5 * y * y - self.scalar_objective(rho, y, lam)
                };
                let (mut lo, mut hi) = (tau, upper);
                if gap(lo) > 0.0 || gap(hi) < 0.0 {
                    return Err(Error::Numerical(format!(
                        "global threshold bisection does not bracket on [{lo}, {hi}]"
                    )));
                }
                while hi - lo > THRESHOLD_ABS_TOL {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if gap(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
            _ => unreachable!(),
        }
    }

    /// Nonzero local minimizer of the scalar objective: the unique root of
    /// `z - y + lam * psi0'(z)` on `[m(lam), inf)`. Requires `y >= tau(lam)`.
    pub fn nonzero_local_minimizer(&self, y: f64, lam: f64) -> Result<f64> {
        self.require_threshold_structure("nonzero_local_minimizer")?;
        if lam <= 0.0 {
            return Ok(y.max(0.0));
        }
        let tau = self.local_threshold_unchecked(lam);
        if y < tau && tau - y > ROOT_REL_TOL * tau {
            return Err(Error::NoNonzeroMinimizer { y, tau });
        }
        Ok(self.nonzero_minimizer_unchecked(y.max(tau), lam))
    }

    fn nonzero_minimizer_unchecked(&self, y: f64, lam: f64) -> f64 {
        if lam <= 0.0 {
            return y;
        }
        match *self {
            PenaltyFamily::LogSum { eps } => {
                let disc = (0.25 * (y + eps) * (y + eps) - lam).max(0.0);
                (0.5 * (y - eps) + disc.sqrt()).max(0.0)
            }
            PenaltyFamily::Lq { q } => {
                let m = self.concavity_boundary_unchecked(lam);
                lq_stationary_point(q, y, lam, m)
            }
            _ => unreachable!(),
        }
    }

    /// Global minimizer of the scalar objective on `[0, inf)`.
    ///
    /// For log-sum and lq the value is 0 below `T(lam)` and the nonzero branch
    /// above it; at `y == T(lam)` the nonzero branch is returned with
    /// `tied = true`.
    pub fn scalar_prox(&self, y: f64, lam: f64) -> ScalarProxResult {
        let y = y.max(0.0);
        let (value, tied) = if lam <= 0.0 {
            (y, false)
        } else {
            match *self {
                PenaltyFamily::L1 => ((y - lam).max(0.0), false),
                PenaltyFamily::Mcp { gamma } => self.mcp_prox(y, lam, gamma),
                PenaltyFamily::Scad { gamma } => {
                    let v = if y <= 2.0 * lam {
                        (y - lam).max(0.0)
                    } else if y <= gamma * lam {
                        ((gamma - 1.0) * y - gamma * lam) / (gamma - 2.0)
                    } else {
                        y
                    };
                    (v, false)
                }
                PenaltyFamily::LogSum { .. } | PenaltyFamily::Lq { .. } => {
                    // validated families never fail here
                    let t = self.global_threshold(lam).unwrap_or(f64::INFINITY);
                    if y < t {
                        (0.0, false)
                    } else {
                        let v = self.nonzero_minimizer_unchecked(y, lam);
                        (v, y == t && self.is_nonconvex_at(lam))
                    }
                }
            }
        };
        ScalarProxResult {
            value,
            tied,
            objective: self.scalar_objective(value, y, lam),
        }
    }

    fn mcp_prox(&self, y: f64, lam: f64, gamma: f64) -> (f64, bool) {
        if gamma > 1.0 {
            // firm thresholding, the objective is strictly convex
            let v = if y <= lam {
                0.0
            } else if y <= gamma * lam {
                (y - lam) / (1.0 - 1.0 / gamma)
            } else {
                y
            };
            return (v, false);
        }
        // concave on [0, gamma*lam]: minimizer is 0 or max(y, gamma*lam)
        let nonzero = y.max(gamma * lam);
        let f0 = self.scalar_objective(0.0, y, lam);
        let f1 = self.scalar_objective(nonzero, y, lam);
        if f1 < f0 {
            (nonzero, false)
        } else if f1 == f0 {
            (nonzero, true)
        } else {
            (0.0, false)
        }
    }
}

/// Safeguarded Newton for `h(z) = z - y + lam q z^(q-1)` on `[m, max(y, m)]`.
/// `h` is convex and increasing there, `h(m) <= 0 <= h(max(y, m))`.
fn lq_stationary_point(q: f64, y: f64, lam: f64, m: f64) -> f64 {
    let h = |z: f64| z - y + lam * q * z.powf(q - 1.0);
    let dh = |z: f64| 1.0 + lam * q * (q - 1.0) * z.powf(q - 2.0);
    let mut lo = m;
    let mut hi = y.max(m);
    if h(lo) >= 0.0 {
        return lo;
    }
    let mut z = hi;
    for _ in 0..200 {
        let hz = h(z);
        if hz == 0.0 {
            return z;
        }
        if hz > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let slope = dh(z);
        let mut next = if slope > 0.0 { z - hz / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= ROOT_REL_TOL * next.abs() || hi - lo <= ROOT_REL_TOL * hi {
            return next;
        }
        z = next;
    }
    z
}

/// Closed-form nonzero minimizer for `q = 1/2` (half thresholding).
/// Valid for `y >= tau(lam)`.
pub fn half_power_closed_form(y: f64, lam: f64) -> f64 {
    if lam <= 0.0 {
        return y;
    }
    let arg = (0.25 * lam * (y / 3.0).powf(-1.5)).min(1.0);
    let phi = arg.acos();
    2.0 / 3.0 * y * (1.0 + (2.0 * std::f64::consts::PI / 3.0 - 2.0 / 3.0 * phi).cos())
}
