//! Cluster-recovery and estimation metrics.

/// F1 score of the pairwise "same magnitude" classification of `x_hat`
/// against `x_star`, over unordered pairs `i < j`. Two entries are in the
/// same cluster when their magnitudes differ by at most `value_tol`.
/// Returns 1 when neither vector has a positive pair.
pub fn f1_cluster(x_hat: &[f64], x_star: &[f64], value_tol: f64) -> f64 {
    assert_eq!(x_hat.len(), x_star.len());
    let p = x_hat.len();
    let (mut tp, mut pred, mut truth) = (0u64, 0u64, 0u64);
    for i in 0..p {
        for j in i + 1..p {
            let same_hat = (x_hat[i].abs() - x_hat[j].abs()).abs() <= value_tol;
            let same_star = (x_star[i].abs() - x_star[j].abs()).abs() <= value_tol;
            pred += same_hat as u64;
            truth += same_star as u64;
            tp += (same_hat && same_star) as u64;
        }
    }
    if pred == 0 && truth == 0 {
        return 1.0;
    }
    if tp == 0 {
        return 0.0;
    }
    let precision = tp as f64 / pred as f64;
    let recall = tp as f64 / truth as f64;
    2.0 * precision * recall / (precision + recall)
}

/// `|x_hat - x_star| / |x_star|`.
pub fn normalized_error(x_hat: &[f64], x_star: &[f64]) -> f64 {
    let diff: f64 = x_hat.iter().zip(x_star).map(|(a, b)| (a - b) * (a - b)).sum();
    let norm: f64 = x_star.iter().map(|v| v * v).sum();
    (diff / norm).sqrt()
}

/// Sample mean and standard deviation (denominator `n - 1`, 0 for `n < 2`).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_examples() {
        let star = [7.0, 7.0, 3.0, 3.0];
        assert_eq!(f1_cluster(&star, &star, 1e-8), 1.0);
        assert_eq!(f1_cluster(&[1.0, 2.0, 3.0, 4.0], &star, 1e-8), 0.0);
        let star: Vec<f64> = [7.0, -5.0, 3.0, -1.0].iter().flat_map(|&v| [v; 7]).collect();
        let f1 = f1_cluster(&[0.0; 28], &star, 1e-8);
        let precision = 84.0 / 378.0;
        assert!((f1 - 2.0 * precision / (1.0 + precision)).abs() < 1e-12);
        assert!((f1 - 0.3636).abs() < 1e-4);
        assert_eq!(f1_cluster(&[1.0, 2.0], &[3.0, 4.0], 1e-8), 1.0);
    }

    #[test]
    fn errors_and_moments() {
        assert_eq!(normalized_error(&[0.0, 0.0], &[3.0, 4.0]), 1.0);
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
    }
}
