//! Synthetic data generators and dataset loading.
//!
//! Every random draw goes through [`stream_rng`]: a ChaCha8 generator seeded
//! from the experiment seed, with one stream per replicate so that results do
//! not depend on scheduling.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Generator for substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Piecewise-constant signal: `sizes[k]` copies of `values[k]`, optionally
/// permuted by [`shuffle_permutation`]`(p, seed)`.
pub fn gen_clustered_signal(
    p: usize,
    values: &[f64],
    sizes: &[usize],
    shuffle: bool,
    seed: u64,
) -> Result<Vec<f64>> {
    if values.len() != sizes.len() || sizes.iter().sum::<usize>() != p {
        return Err(Error::Config(format!(
            "cluster sizes {sizes:?} must match the values and sum to p = {p}"
        )));
    }
    let x: Vec<f64> = values
        .iter()
        .zip(sizes)
        .flat_map(|(&v, &n)| std::iter::repeat_n(v, n))
        .collect();
    if !shuffle {
        return Ok(x);
    }
    let perm = shuffle_permutation(p, seed);
    Ok(perm.iter().map(|&i| x[i]).collect())
}

/// Permutation used by [`gen_clustered_signal`]: entry `k` of the shuffled
/// signal is entry `perm[k]` of the ordered one.
pub fn shuffle_permutation(p: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..p).collect();
    perm.shuffle(&mut stream_rng(seed, u64::MAX));
    perm
}

pub fn standard_normal_vec(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n x p` matrix with i.i.d. Gaussian rows of covariance
/// `Sigma_ij = rho^|i - j|`.
pub fn gen_toeplitz_design(n: usize, p: usize, rho: f64, rng: &mut impl Rng) -> Result<DMatrix<f64>> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Config(format!("rho must lie in [0, 1), got {rho}")));
    }
    let sigma = DMatrix::from_fn(p, p, |i, j| rho.powi((i as i32 - j as i32).abs()));
    let chol = sigma
        .cholesky()
        .ok_or_else(|| Error::Numerical("Toeplitz covariance is not positive definite".into()))?;
    let l = chol.l();
    // draw row by row so that the stream does not depend on the layout
    let mut z = DMatrix::<f64>::zeros(n, p);
    for i in 0..n {
        for j in 0..p {
            z[(i, j)] = rng.sample(StandardNormal);
        }
    }
    Ok(z * l.transpose())
}

/// `x + sigma * N(0, I)`.
pub fn add_noise_sigma(x: &[f64], sigma: f64, rng: &mut impl Rng) -> Vec<f64> {
    if sigma == 0.0 {
        return x.to_vec();
    }
    x.iter()
        .map(|&v| v + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Gaussian noise rescaled so that `|signal| / |noise| = snr` exactly.
/// Returns `(signal + noise, noise)`.
pub fn add_noise_snr(signal: &[f64], snr: f64, rng: &mut impl Rng) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(snr.is_finite() && snr > 0.0) {
        return Err(Error::Config(format!("snr must be positive, got {snr}")));
    }
    let norm = signal.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Numerical("cannot scale noise to an SNR for a zero signal".into()));
    }
    let raw = standard_normal_vec(signal.len(), rng);
    let raw_norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = norm / (snr * raw_norm);
    let noise: Vec<f64> = raw.iter().map(|v| v * scale).collect();
    let noisy = signal.iter().zip(&noise).map(|(s, e)| s + e).collect();
    Ok((noisy, noise))
}

/// Numeric CSV with a header; the last column is the target.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub features: DMatrix<f64>,
    pub target: DVector<f64>,
}

pub fn load_dataset_csv(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_dataset_csv(&text)
}

pub fn parse_dataset_csv(text: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
        .clone();
    if header.len() < 2 {
        return Err(Error::Parse { line: 1, msg: "need at least one feature and a target".into() });
    }
    let width = header.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if rec.len() != width {
            return Err(Error::Parse { line, msg: format!("expected {width} fields, got {}", rec.len()) });
        }
        let row = rec
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse { line, msg: format!("non-numeric field `{f}`") })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 2, msg: "no data rows".into() });
    }
    let n = rows.len();
    let p = width - 1;
    Ok(Dataset {
        feature_names: header.iter().take(p).map(str::to_string).collect(),
        features: DMatrix::from_fn(n, p, |i, j| rows[i][j]),
        target: DVector::from_fn(n, |i, _| rows[i][p]),
    })
}

impl Dataset {
    /// Centers every column and scales features to unit variance; the target
    /// is only centered. Constant features are left at zero.
    pub fn standardized(&self) -> Dataset {
        let n = self.features.nrows() as f64;
        let mut features = self.features.clone();
        for mut col in features.column_iter_mut() {
            let mean = col.sum() / n;
            col.add_scalar_mut(-mean);
            let sd = (col.norm_squared() / n).sqrt();
            if sd > 0.0 {
                col /= sd;
            }
        }
        let mean = self.target.sum() / n;
        Dataset {
            feature_names: self.feature_names.clone(),
            features,
            target: self.target.add_scalar(-mean),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustered_signal() {
        let x = gen_clustered_signal(28, &[7.0, -5.0, 3.0, -1.0], &[7; 4], false, 0).unwrap();
        assert_eq!(x[0], 7.0);
        assert_eq!(x[27], -1.0);
        assert_eq!(gen_clustered_signal(3, &[0.0], &[3], false, 0).unwrap(), vec![0.0; 3]);
        assert!(gen_clustered_signal(5, &[1.0], &[3], false, 0).is_err());
        let shuffled = gen_clustered_signal(28, &[7.0, -5.0, 3.0, -1.0], &[7; 4], true, 9).unwrap();
        let perm = shuffle_permutation(28, 9);
        let mut back = vec![0.0; 28];
        for (k, &i) in perm.iter().enumerate() {
            back[i] = shuffled[k];
        }
        assert_eq!(back, x);
    }

    #[test]
    fn snr_is_exact() {
        let mut rng = stream_rng(1, 0);
        let s = vec![1.0, -2.0, 0.5, 3.0];
        let (_, noise) = add_noise_snr(&s, 7.0, &mut rng).unwrap();
        let ratio = s.iter().map(|v| v * v).sum::<f64>().sqrt() / noise.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((ratio - 7.0).abs() < 1e-12);
        assert!(add_noise_snr(&[0.0, 0.0], 7.0, &mut rng).is_err());
        assert_eq!(add_noise_sigma(&s, 0.0, &mut rng), s);
    }

    #[test]
    fn toeplitz_covariance() {
        let mut rng = stream_rng(5, 0);
        let (n, p, rho) = (50_000, 5, 0.4);
        let a = gen_toeplitz_design(n, p, rho, &mut rng).unwrap();
        let cov = a.tr_mul(&a) / n as f64;
        for i in 0..p {
            for j in 0..p {
                let expected = rho.powi((i as i32 - j as i32).abs());
                assert!((cov[(i, j)] - expected).abs() < 0.02, "entry ({i},{j})");
            }
        }
        let a = gen_toeplitz_design(10_000, 3, 0.0, &mut rng).unwrap();
        let cov = a.tr_mul(&a) / 10_000.0;
        assert!(cov[(0, 1)].abs() < 0.1 && cov[(1, 2)].abs() < 0.1);
        assert!(gen_toeplitz_design(2, 2, 1.0, &mut rng).is_err());
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = standard_normal_vec(4, &mut stream_rng(3, 1));
        let b = standard_normal_vec(4, &mut stream_rng(3, 1));
        let c = standard_normal_vec(4, &mut stream_rng(3, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn csv_parsing() {
        let ds = parse_dataset_csv("a,b,y\n1,2,3\n4,5,6\n").unwrap();
        assert_eq!(ds.features.shape(), (2, 2));
        assert_eq!(ds.target[1], 6.0);
        assert!(matches!(parse_dataset_csv("a,y\n1,2\nx,3\n"), Err(Error::Parse { line: 3, .. })));
        let st = ds.standardized();
        assert!(st.features.column(0).sum().abs() < 1e-12);
        assert!((st.features.column(0).norm_squared() / 2.0 - 1.0).abs() < 1e-12);
        assert!(st.target.sum().abs() < 1e-12);
    }
}
