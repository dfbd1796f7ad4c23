//! Block partitions and the pool-adjacent-violators engine.
//!
//! PAV works on a sorted nonnegative input `y_1 >= ... >= y_p >= 0` with a
//! non-increasing weight sequence. It keeps a stack of contiguous blocks, each
//! carrying a value given by a [`PoolingRule`], and merges neighbours whenever
//! the values are out of order.

use crate::error::{Error, Result};
use crate::penalty::PenaltyFamily;

/// A contiguous range of indices `start..=end` sharing one value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub value: f64,
    pub y_sum: f64,
    pub lam_sum: f64,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn y_mean(&self) -> f64 {
        self.y_sum / self.len() as f64
    }

    pub fn lam_mean(&self) -> f64 {
        self.lam_sum / self.len() as f64
    }

    /// Block over `start..=end` with sums taken from the input slices; the
    /// value is left at 0.
    pub fn from_range(start: usize, end: usize, y: &[f64], lams: &[f64]) -> Self {
        Block {
            start,
            end,
            value: 0.0,
            y_sum: y[start..=end].iter().sum(),
            lam_sum: lams[start..=end].iter().sum(),
        }
    }

    fn merged(&self, next: &Block) -> Block {
        debug_assert_eq!(self.end + 1, next.start);
        Block {
            start: self.start,
            end: next.end,
            value: 0.0,
            y_sum: self.y_sum + next.y_sum,
            lam_sum: self.lam_sum + next.lam_sum,
        }
    }
}

/// Ordered contiguous blocks covering `0..p`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    pub blocks: Vec<Block>,
    pub p: usize,
    /// Pooling evaluations spent by the PAV run that produced this partition.
    pub pool_calls: usize,
}

impl BlockPartition {
    /// Expands the partition to a length-`p` vector.
    pub fn flatten(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.p];
        for b in &self.blocks {
            x[b.start..=b.end].fill(b.value);
        }
        x
    }

    /// Maximal constant runs of `x` as a partition (sums are taken from
    /// `y` and `lams`).
    pub fn from_vector(x: &[f64], y: &[f64], lams: &[f64]) -> Self {
        let blocks = maximal_blocks(x)
            .into_iter()
            .map(|(s, e)| Block {
                value: x[s],
                ..Block::from_range(s, e, y, lams)
            })
            .collect();
        BlockPartition {
            blocks,
            p: x.len(),
            pool_calls: 0,
        }
    }
}

/// Index ranges `(start, end)` of the maximal runs of equal values.
pub fn maximal_blocks(x: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=x.len() {
        if i == x.len() || x[i] != x[start] {
            if i > start {
                out.push((start, i - 1));
            }
            start = i;
        }
    }
    out
}

/// How a block is assigned its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoolingRule {
    /// Exact minimizer of the block's averaged prox problem for a weakly
    /// convex family with stepsize `eta` (requires `eta * mu < 1`).
    WeaklyConvex { family: PenaltyFamily, eta: f64 },
    /// Largest local minimizer of the averaged scalar objective for log-sum
    /// or lq (weights already multiplied by the stepsize).
    NonconvexChi { family: PenaltyFamily },
    /// Convex part `mcp(z; lam) + z^2 / (2 gamma)` of sorted MCP, used by the
    /// majorization-minimization baseline.
    McpConvexPart { gamma: f64, eta: f64 },
}

impl PoolingRule {
    /// Weakly convex pooling, checked against the stepsize regime.
    pub fn weakly_convex(family: PenaltyFamily, eta: f64, lam_max: f64) -> Result<Self> {
        family.validate()?;
        check_eta(eta)?;
        let mu = family.weak_convexity_modulus(lam_max);
        if (eta * mu).is_nan() || eta * mu >= 1.0 {
            return Err(Error::Regime(format!(
                "{family}: eta * mu = {} is not below 1",
                eta * mu
            )));
        }
        Ok(PoolingRule::WeaklyConvex { family, eta })
    }

    pub fn nonconvex_chi(family: PenaltyFamily) -> Result<Self> {
        family.validate()?;
        if !family.has_threshold_structure() {
            return Err(Error::UnsupportedFamily {
                op: "nonconvex_chi",
                family: family.to_string(),
            });
        }
        Ok(PoolingRule::NonconvexChi { family })
    }

    pub fn mcp_convex_part(gamma: f64, eta: f64) -> Result<Self> {
        PenaltyFamily::mcp(gamma)?;
        check_eta(eta)?;
        Ok(PoolingRule::McpConvexPart { gamma, eta })
    }

    /// Value of `block`. `lams` is the full weight sequence, needed by the
    /// rules that are not functions of the block average alone.
    pub fn pool(&self, block: &Block, lams: &[f64]) -> f64 {
        let ybar = block.y_mean();
        match *self {
            PoolingRule::WeaklyConvex { family, eta } => match family {
                PenaltyFamily::Mcp { gamma } => {
                    mcp_block_root(ybar, &lams[block.start..=block.end], gamma, eta, 0.0)
                }
                PenaltyFamily::Scad { gamma } => {
                    scad_block_root(ybar, &lams[block.start..=block.end], gamma, eta)
                }
                _ => family.scalar_prox(ybar, eta * block.lam_mean()).value,
            },
            PoolingRule::NonconvexChi { family } => chi(family, ybar, block.lam_mean()),
            PoolingRule::McpConvexPart { gamma, eta } => {
                mcp_block_root(ybar, &lams[block.start..=block.end], gamma, eta, 1.0 / gamma)
            }
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("stepsize must be positive, got {eta}")))
    }
}

/// Largest local minimizer of `1/2 (z - ybar)^2 + lbar * psi0(z)`.
pub fn chi(family: PenaltyFamily, ybar: f64, lbar: f64) -> f64 {
    if lbar <= 0.0 {
        return ybar.max(0.0);
    }
    let tau = family
        .local_threshold(lbar)
        .expect("chi needs a log-sum or lq family");
    if ybar >= tau {
        family
            .nonzero_local_minimizer(ybar, lbar)
            .expect("ybar >= tau admits a nonzero minimizer")
    } else {
        0.0
    }
}

/// Block value for the weakly convex pooling with the scalar derivative
/// `(lam - z / gamma)_+ + c z` (sorted MCP for `c = 0`, its convex part for
/// `c = 1 / gamma`).
///
/// `f(z) = (n / eta)(z - ybar) + sum_i (lam_i - z / gamma)_+ + n c z` is
/// increasing and affine between the breakpoints `gamma * lam_i`, which are
/// sorted in decreasing order because `lams` is.
fn mcp_block_root(ybar: f64, lams: &[f64], gamma: f64, eta: f64, c: f64) -> f64 {
    let n = lams.len() as f64;
    let total: f64 = lams.iter().sum();
    if ybar <= eta * total / n {
        return 0.0;
    }
    let slope_data = n / eta;
    let f = |z: f64, k: usize, s: f64| slope_data * (z - ybar) + s - k as f64 * z / gamma + n * c * z;
    let root = |k: usize, s: f64| {
        (ybar - eta * s / n) / (1.0 - k as f64 * eta / (n * gamma) + eta * c)
    };
    // active set on (gamma lam_{k+1}, gamma lam_k] is the first k weights
    let mut s = total;
    for k in (1..=lams.len()).rev() {
        let u = gamma * lams[k - 1];
        if f(u, k, s) >= 0.0 {
            return root(k, s).min(u).max(0.0);
        }
        s -= lams[k - 1];
    }
    root(0, 0.0)
}

/// Block value for sorted SCAD: root of an increasing piecewise affine
/// function with breakpoints `lam_i` and `gamma * lam_i`.
fn scad_block_root(ybar: f64, lams: &[f64], gamma: f64, eta: f64) -> f64 {
    let n = lams.len() as f64;
    let f = |z: f64| {
        let mut acc = n / eta * (z - ybar);
        for &l in lams {
            acc += if z <= l {
                l
            } else {
                ((gamma * l - z) / (gamma - 1.0)).max(0.0)
            };
        }
        acc
    };
    if f(0.0) >= 0.0 {
        return 0.0;
    }
    let mut knots: Vec<f64> = lams
        .iter()
        .flat_map(|&l| [l, gamma * l])
        .filter(|&k| k > 0.0)
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    // first knot with f >= 0; f is increasing so binary search applies
    let idx = knots.partition_point(|&k| f(k) < 0.0);
    if idx == knots.len() {
        // past every knot the penalty is flat
        return ybar;
    }
    let hi = knots[idx];
    let lo = if idx == 0 { 0.0 } else { knots[idx - 1] };
    let (flo, fhi) = (f(lo), f(hi));
    if fhi == flo {
        return hi;
    }
    (lo - flo * (hi - lo) / (fhi - flo)).clamp(lo, hi)
}

/// Incremental PAV: blocks are pushed left to right and violations are
/// resolved immediately, so after each push the stack holds the PAV solution
/// of the prefix seen so far.
#[derive(Debug, Clone)]
pub struct PavState<'a> {
    y: &'a [f64],
    lams: &'a [f64],
    rule: PoolingRule,
    stack: Vec<Block>,
    pool_calls: usize,
}

impl<'a> PavState<'a> {
    /// Inputs are assumed validated (see [`check_inputs`]).
    pub fn new(y: &'a [f64], lams: &'a [f64], rule: PoolingRule) -> Self {
        PavState {
            y,
            lams,
            rule,
            stack: Vec::with_capacity(y.len()),
            pool_calls: 0,
        }
    }

    fn pooled(&mut self, mut block: Block) -> Block {
        self.pool_calls += 1;
        block.value = self.rule.pool(&block, self.lams);
        block
    }

    /// Pushes the range `start..=end`, which must follow the current stack.
    pub fn push(&mut self, start: usize, end: usize) {
        debug_assert_eq!(start, self.stack.last().map_or(0, |b| b.end + 1));
        let mut cur = self.pooled(Block::from_range(start, end, self.y, self.lams));
        match self.stack.last() {
            Some(top) if top.value < cur.value => {}
            _ => {
                self.stack.push(cur);
                return;
            }
        }
        let top = self.stack.pop().unwrap();
        cur = self.pooled(top.merged(&cur));
        while let Some(prev) = self.stack.last() {
            if prev.value > cur.value {
                break;
            }
            let prev = self.stack.pop().unwrap();
            cur = self.pooled(prev.merged(&cur));
        }
        self.stack.push(cur);
    }

    pub fn blocks(&self) -> &[Block] {
        &self.stack
    }

    /// Number of indices covered so far.
    pub fn covered(&self) -> usize {
        self.stack.last().map_or(0, |b| b.end + 1)
    }

    pub fn pool_calls(&self) -> usize {
        self.pool_calls
    }

    /// Final partition, with the blockwise positive part applied.
    pub fn finish(self) -> BlockPartition {
        let p = self.covered();
        let blocks = self
            .stack
            .into_iter()
            .map(|b| Block {
                value: b.value.max(0.0),
                ..b
            })
            .collect();
        BlockPartition {
            blocks,
            p,
            pool_calls: self.pool_calls,
        }
    }
}

/// Validates PAV inputs: equal lengths, `y` sorted non-increasing and
/// nonnegative, `lams` non-increasing and nonnegative.
pub fn check_inputs(y: &[f64], lams: &[f64]) -> Result<()> {
    if y.len() != lams.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            got: lams.len(),
        });
    }
    if y.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || y.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(
            "y must be finite, nonnegative and sorted non-increasingly".into(),
        ));
    }
    check_weights(lams)
}

/// Weights must be finite, nonnegative and non-increasing.
pub fn check_weights(lams: &[f64]) -> Result<()> {
    if lams.iter().any(|v| !(v.is_finite() && *v >= 0.0))
        || lams.windows(2).any(|w| w[0] < w[1])
    {
        return Err(Error::InvalidParameter(
            "weights must be finite, nonnegative and non-increasing".into(),
        ));
    }
    Ok(())
}

/// PAV from singletons.
pub fn pav(y: &[f64], lams: &[f64], rule: PoolingRule) -> Result<BlockPartition> {
    check_inputs(y, lams)?;
    let mut state = PavState::new(y, lams, rule);
    for i in 0..y.len() {
        state.push(i, i);
    }
    Ok(state.finish())
}

/// PAV started from an initial partition given by block end indices
/// (inclusive, increasing, the last one equal to `p - 1`).
pub fn pav_from_partition(
    y: &[f64],
    lams: &[f64],
    ends: &[usize],
    rule: PoolingRule,
) -> Result<BlockPartition> {
    check_inputs(y, lams)?;
    let valid = ends.windows(2).all(|w| w[0] < w[1]) && ends.last() == Some(&(y.len() - 1));
    if !valid && !y.is_empty() {
        return Err(Error::Precondition(
            "initial partition must be increasing block ends covering 0..p".into(),
        ));
    }
    let mut state = PavState::new(y, lams, rule);
    let mut start = 0;
    for &end in ends {
        state.push(start, end);
        start = end + 1;
    }
    Ok(state.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn slope(eta: f64) -> PoolingRule {
        PoolingRule::weakly_convex(PenaltyFamily::L1, eta, 10.0).unwrap()
    }

    #[test]
    fn zero_weights_are_identity() {
        let y = [5.0, 3.0, 3.0, 0.5];
        let part = pav(&y, &[0.0; 4], slope(1.0)).unwrap();
        assert_eq!(part.flatten(), y.to_vec());
    }

    #[test]
    fn slope_examples() {
        let part = pav(&[3.0, 1.0], &[2.0, 1.0], slope(1.0)).unwrap();
        assert_eq!(part.flatten(), vec![1.0, 0.0]);
        let part = pav(&[2.0, 1.99], &[1.5, 0.1], slope(1.0)).unwrap();
        let x = part.flatten();
        assert_abs_diff_eq!(x[0], 1.195, epsilon = 1e-12);
        assert_eq!(x[0], x[1]);
        assert_eq!(part.blocks.len(), 1);
    }

    #[test]
    fn mcp_pooling_matches_scalar_prox() {
        let rule = PoolingRule::weakly_convex(PenaltyFamily::Mcp { gamma: 2.0 }, 1.0, 1.0).unwrap();
        let y = [1.6, 1.4];
        let lams = [1.0, 1.0];
        let b = Block::from_range(0, 1, &y, &lams);
        assert_abs_diff_eq!(rule.pool(&b, &lams), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn log_sum_pooling_below_threshold_is_zero() {
        let rule = PoolingRule::weakly_convex(PenaltyFamily::LogSum { eps: 1.0 }, 0.9, 1.0).unwrap();
        let y = [0.5];
        let lams = [1.0];
        assert_eq!(rule.pool(&Block::from_range(0, 0, &y, &lams), &lams), 0.0);
        let rule = PoolingRule::weakly_convex(PenaltyFamily::L1, 1.0, 0.0).unwrap();
        assert_eq!(rule.pool(&Block::from_range(0, 0, &[2.5], &[0.0]), &[0.0]), 2.5);
    }

    #[test]
    fn regime_is_enforced() {
        assert!(PoolingRule::weakly_convex(PenaltyFamily::Mcp { gamma: 2.0 }, 2.0, 1.0).is_err());
        assert!(PoolingRule::weakly_convex(PenaltyFamily::LogSum { eps: 1.0 }, 1.0, 1.0).is_err());
        assert!(PoolingRule::weakly_convex(PenaltyFamily::Lq { q: 0.5 }, 0.1, 1.0).is_err());
        assert!(PoolingRule::nonconvex_chi(PenaltyFamily::L1).is_err());
    }

    #[test]
    fn chi_examples() {
        let half = PenaltyFamily::Lq { q: 0.5 };
        assert_eq!(chi(half, 1.0, 1.0), 0.0);
        assert_abs_diff_eq!(chi(half, 1.5, 1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mcp_block_root_solves_stationarity() {
        // brute-force root of the block derivative by bisection
        let lams = [3.0, 2.5, 1.0, 0.2];
        for &(gamma, eta, c) in &[(2.0, 1.0, 0.0), (1.2, 0.5, 0.0), (1.1, 0.7, 1.0 / 1.1)] {
            for &ybar in &[0.1, 1.0, 1.8, 2.4, 4.0, 9.0] {
                let n = lams.len() as f64;
                let f = |z: f64| {
                    n / eta * (z - ybar)
                        + lams.iter().map(|l| (l - z / gamma).max(0.0)).sum::<f64>()
                        + n * c * z
                };
                let expected = if f(0.0) >= 0.0 {
                    0.0
                } else {
                    let (mut lo, mut hi) = (0.0, ybar.max(1.0) * 10.0);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if f(mid) < 0.0 { lo = mid } else { hi = mid }
                    }
                    lo
                };
                let got = mcp_block_root(ybar, &lams, gamma, eta, c);
                assert_abs_diff_eq!(got, expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn scad_block_root_solves_stationarity() {
        let lams = [2.0, 1.5, 1.5, 0.3];
        let (gamma, eta) = (3.7, 1.0);
        for &ybar in &[0.2, 1.0, 1.7, 2.5, 3.9, 6.0, 12.0] {
            let n = lams.len() as f64;
            let fam = PenaltyFamily::Scad { gamma };
            let f = |z: f64| n / eta * (z - ybar) + lams.iter().map(|&l| fam.dpsi(z.max(1e-300), l)).sum::<f64>();
            let expected = if f(0.0) >= 0.0 {
                0.0
            } else {
                let (mut lo, mut hi) = (0.0, 20.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < 0.0 { lo = mid } else { hi = mid }
                }
                lo
            };
            assert_abs_diff_eq!(scad_block_root(ybar, &lams, gamma, eta), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn pool_call_budget() {
        let y: Vec<f64> = (0..50).map(|i| 10.0 - 0.1 * i as f64).collect();
        let lams: Vec<f64> = (0..50).map(|i| 5.0 - 0.1 * i as f64).collect();
        let part = pav(&y, &lams, slope(1.0)).unwrap();
        assert!(part.pool_calls < 2 * y.len());
    }

    #[test]
    fn flatten_and_blocks() {
        let part = BlockPartition {
            blocks: vec![Block { start: 0, end: 2, value: 2.0, y_sum: 0.0, lam_sum: 0.0 }],
            p: 3,
            pool_calls: 0,
        };
        assert_eq!(part.flatten(), vec![2.0; 3]);
        let x = [3.0, 1.0, 1.0];
        let rebuilt = BlockPartition::from_vector(&x, &x, &[0.0; 3]);
        assert_eq!(rebuilt.flatten(), x.to_vec());
        assert_eq!(maximal_blocks(&x), vec![(0, 0), (1, 2)]);
        assert!(maximal_blocks(&[]).is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(pav(&[1.0, 2.0], &[1.0, 1.0], slope(1.0)), Err(Error::Precondition(_))));
        assert!(matches!(
            pav(&[2.0, 1.0], &[1.0], slope(1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn forced_initial_partition() {
        let y = [3.0, 2.0, 1.0];
        let lams = [0.0; 3];
        let part = pav_from_partition(&y, &lams, &[0, 2], slope(1.0)).unwrap();
        assert_eq!(part.flatten(), vec![3.0, 1.5, 1.5]);
    }
}
