use proptest::prelude::*;

use sortedprox::isotonic::chi;
use sortedprox::oracle::{exhaustive_partition_prox, finite_diff_check, grid_prox_2d, grid_scalar_prox};
use sortedprox::prox::{reduce, sorted_objective, verify_local_minimizer};
use sortedprox::{prox, PenaltyFamily, SortedPenalty};

fn any_family() -> impl Strategy<Value = PenaltyFamily> {
    prop_oneof![
        Just(PenaltyFamily::L1),
        (1.1f64..5.0).prop_map(|gamma| PenaltyFamily::Mcp { gamma }),
        (2.1f64..5.0).prop_map(|gamma| PenaltyFamily::Scad { gamma }),
        (0.2f64..2.0).prop_map(|eps| PenaltyFamily::LogSum { eps }),
        prop::sample::select(vec![0.3, 0.5, 0.67, 0.8]).prop_map(|q| PenaltyFamily::Lq { q }),
    ]
}

fn thresholded_family() -> impl Strategy<Value = PenaltyFamily> {
    prop_oneof![
        (0.3f64..1.5).prop_map(|eps| PenaltyFamily::LogSum { eps }),
        prop::sample::select(vec![0.3, 0.5, 0.67, 0.8]).prop_map(|q| PenaltyFamily::Lq { q }),
    ]
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Weights drawn independently, then sorted non-increasingly.
fn weights(p: usize, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    weights_in(p, 0.0, hi)
}

fn weights_in(p: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, p).prop_map(sorted_desc)
}

fn instance(max_p: usize, y_hi: f64, lam_hi: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_p).prop_flat_map(move |p| (prop::collection::vec(-y_hi..y_hi, p), weights(p, lam_hi)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_prox_matches_dense_grid(family in any_family(), y in 0.0f64..10.0, lam in 0.0f64..5.0) {
        let fast = family.scalar_prox(y, lam);
        let (_, f) = grid_scalar_prox(family, y, lam, y + 1.0, 1e-3);
        let obj = 0.5 * (fast.value - y).powi(2) + family.psi(fast.value, lam);
        prop_assert!((obj - f).abs() <= 1e-8, "{obj} vs grid {f}");
        prop_assert!((fast.objective - obj).abs() <= 1e-12 * obj.max(1.0));
    }

    #[test]
    fn scalar_prox_is_monotone(family in any_family(), a in 0.0f64..10.0, b in 0.0f64..10.0, lam in 0.0f64..5.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (zl, zh) = (family.scalar_prox(lo, lam).value, family.scalar_prox(hi, lam).value);
        prop_assert!(zl <= zh + 1e-12, "prox({lo}) = {zl} > prox({hi}) = {zh}");
        prop_assert!(zh <= hi + 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences(family in any_family(), z in 0.05f64..10.0, lam in 0.1f64..5.0) {
        prop_assume!(family.nondiff_points(lam).iter().all(|k| (z - k).abs() > 1e-3));
        let first = finite_diff_check(|t| family.psi(t, lam), |t| family.psi_prime(t, lam).unwrap(), z, 1e-6);
        prop_assert!(first <= 1e-6, "psi' relative error {first}");
        let second = finite_diff_check(
            |t| family.psi_prime(t, lam).unwrap(),
            |t| family.psi_second(t, lam),
            z,
            1e-6,
        );
        prop_assert!(second <= 1e-5, "psi'' relative error {second}");
    }

    #[test]
    fn slope_pav_matches_exhaustive((y, lams) in instance(8, 5.0, 3.0)) {
        let pen = SortedPenalty::new(PenaltyFamily::L1, lams.clone(), 1.0).unwrap();
        let res = prox(&pen, &y).unwrap();
        let y_sorted = reduce(&y).unwrap().y_sorted;
        let oracle = exhaustive_partition_prox(PenaltyFamily::L1, &lams, &y_sorted, 1.0).unwrap();
        prop_assert!((res.objective - oracle.objective).abs() <= 1e-9);
    }

    #[test]
    fn dpav_is_global_when_the_weights_have_global_structure(
        family in thresholded_family(),
        (y, lams) in instance(8, 6.0, 4.0),
    ) {
        let pen = SortedPenalty::new(family, lams.clone(), 1.0).unwrap();
        prop_assume!(!pen.is_weakly_convex_regime());
        let res = prox(&pen, &y).unwrap();
        prop_assume!(!res.structure_warning);
        let y_sorted = reduce(&y).unwrap().y_sorted;
        let oracle = exhaustive_partition_prox(family, &lams, &y_sorted, 1.0).unwrap();
        prop_assert!(res.objective <= oracle.objective + 1e-9, "{} vs {}", res.objective, oracle.objective);
    }

    #[test]
    fn sign_flips_and_permutations_commute_with_prox(
        family in any_family(),
        (y, lams) in instance(10, 5.0, 1.5),
        flips in prop::collection::vec(any::<bool>(), 10),
        seed in any::<u64>(),
    ) {
        let pen = SortedPenalty::new(family, lams, 1.0).unwrap();
        let x = prox(&pen, &y).unwrap().x;
        let flipped: Vec<f64> = y.iter().zip(&flips).map(|(&v, &f)| if f { -v } else { v }).collect();
        let xf = prox(&pen, &flipped).unwrap().x;
        for (i, (&a, &b)) in x.iter().zip(&xf).enumerate() {
            let expected = if flips[i] && a != 0.0 { -a } else { a };
            prop_assert_eq!(b.to_bits(), expected.to_bits());
        }
        // a rotation is enough to move every entry
        let p = y.len();
        let shift = (seed as usize) % p;
        let rotated: Vec<f64> = (0..p).map(|k| y[(k + shift) % p]).collect();
        let xr = prox(&pen, &rotated).unwrap().x;
        for k in 0..p {
            prop_assert_eq!(xr[k].to_bits(), x[(k + shift) % p].to_bits());
        }
    }

    #[test]
    fn prox_matches_dense_grid_in_two_dimensions(
        family in any_family(),
        y in prop::array::uniform2(-4.0f64..4.0),
        l in prop::array::uniform2(0.0f64..2.0),
    ) {
        let lams = [l[0].max(l[1]), l[0].min(l[1])];
        let pen = SortedPenalty::new(family, lams.to_vec(), 1.0).unwrap();
        let res = prox(&pen, &y).unwrap();
        prop_assume!(!res.structure_warning);
        let radius = y[0].abs().max(y[1].abs()) + 0.5;
        let (_, grid) = grid_prox_2d(family, lams, 1.0, y, radius, 401);
        prop_assert!(res.objective <= grid + 1e-9, "prox {} above grid {grid}", res.objective);
        prop_assert!(grid <= res.objective + 1e-3, "grid {grid} far above prox {}", res.objective);
    }
}

/// Objective of the sorted problem restricted to the cone `x1 >= x2 >= x3 >= 0`.
fn cone_objective(family: PenaltyFamily, lams: &[f64], y: &[f64], x: &[f64]) -> Option<f64> {
    let feasible = x.iter().all(|&v| v >= 0.0) && x.windows(2).all(|w| w[0] >= w[1]);
    feasible.then(|| sorted_objective(family, lams, 1.0, y, x))
}

/// `Some(true)` if no feasible perturbation of size `delta` decreases the
/// objective, `Some(false)` if one does, at both scales; `None` when the two
/// scales disagree. The steps are small enough to sit inside the basin of the
/// zero block for lq (its radius shrinks like `(lam / sum y)^(1 / (1 - q))`),
/// and large enough for first-order changes to clear rounding.
fn brute_force_local_min(family: PenaltyFamily, lams: &[f64], y: &[f64], x: &[f64]) -> Option<bool> {
    let f0 = cone_objective(family, lams, y, x).unwrap();
    let steps = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let decreases = |delta: f64| {
        for a in steps {
            for b in steps {
                for c in steps {
                    let z = [x[0] + delta * a, x[1] + delta * b, x[2] + delta * c];
                    if let Some(f) = cone_objective(family, lams, y, &z) {
                        if f < f0 - 1e-13 * f0.abs().max(1.0) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    };
    match (decreases(1e-8), decreases(1e-9)) {
        (false, false) => Some(true),
        (true, true) => Some(false),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verifier_agrees_with_perturbation_search_in_dimension_three(
        family in thresholded_family(),
        y in prop::collection::vec(0.0f64..5.0, 3).prop_map(sorted_desc),
        lams in weights_in(3, 0.5, 2.0),
    ) {
        // every candidate built from blocks valued at 0 or their pooled value
        let partitions: [&[(usize, usize)]; 4] = [
            &[(0, 2)],
            &[(0, 0), (1, 2)],
            &[(0, 1), (2, 2)],
            &[(0, 0), (1, 1), (2, 2)],
        ];
        for blocks in partitions {
            for mask in 0..(1u32 << blocks.len()) {
                let mut x = [0.0; 3];
                for (k, &(a, b)) in blocks.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        let n = (b - a + 1) as f64;
                        let ybar = y[a..=b].iter().sum::<f64>() / n;
                        let lbar = lams[a..=b].iter().sum::<f64>() / n;
                        x[a..=b].fill(chi(family, ybar, lbar));
                    }
                }
                if cone_objective(family, &lams, &y, &x).is_none() {
                    continue;
                }
                let Some(brute) = brute_force_local_min(family, &lams, &y, &x) else { continue };
                let verdict = verify_local_minimizer(family, &lams, &y, &x).unwrap();
                prop_assert_eq!(
                    verdict.is_local_minimizer,
                    brute,
                    "x = {:?}, violations {:?}",
                    x,
                    verdict.violations
                );
            }
        }
    }
}
