//! Synthetic series with known structure.
//!
//! Fractional Gaussian noise is drawn with exact covariance by circulant
//! embedding (Davies–Harte), falling back to a Cholesky factor of the
//! Toeplitz covariance when the embedding has negative eigenvalues. All
//! generators are deterministic in their seed: randomness comes from a
//! ChaCha8 stream seeded with the 64-bit seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::series_io::TimeSeries;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("Hurst exponent {0} outside (0, 1)")]
    HurstOutOfRange(f64),
    #[error("length {0} too short, need at least 2")]
    LengthTooShort(usize),
    #[error("covariance embedding is not positive definite (H = {hurst}, n = {length})")]
    EmbeddingNotPositiveDefinite { hurst: f64, length: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbmConfig {
    pub hurst: f64,
    pub length: usize,
    pub seed: u64,
}

impl FbmConfig {
    pub fn new(hurst: f64, length: usize, seed: u64) -> Result<Self, SynthError> {
        let cfg = Self {
            hurst,
            length,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), SynthError> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(SynthError::HurstOutOfRange(self.hurst));
        }
        if self.length < 2 {
            return Err(SynthError::LengthTooShort(self.length));
        }
        Ok(())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Autocovariance of unit-variance fGn at lag `lag`.
pub fn fgn_autocovariance(hurst: f64, lag: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = lag as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::from_values(values).expect("generated values are finite and nonempty")
}

/// Unit-variance fractional Gaussian noise of `config.length` samples.
pub fn gen_fgn(config: &FbmConfig) -> Result<TimeSeries, SynthError> {
    config.validate()?;
    let values = match fgn_circulant(config) {
        Ok(v) => v,
        Err(SynthError::EmbeddingNotPositiveDefinite { .. }) => {
            log::debug!(
                "circulant embedding failed for H={} n={}, using Cholesky",
                config.hurst,
                config.length
            );
            fgn_cholesky(config)?
        }
        Err(e) => return Err(e),
    };
    Ok(series(values))
}

/// Fractional Brownian motion: zero followed by the running sum of fGn.
pub fn gen_fbm(config: &FbmConfig) -> Result<TimeSeries, SynthError> {
    let noise = gen_fgn(config)?;
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(config.length);
    values.push(0.0);
    for &x in &noise.values()[..config.length - 1] {
        acc += x;
        values.push(acc);
    }
    Ok(series(values))
}

pub fn gen_uniform_random(length: usize, seed: u64) -> Result<TimeSeries, SynthError> {
    if length < 2 {
        return Err(SynthError::LengthTooShort(length));
    }
    let mut rng = rng(seed);
    Ok(series((0..length).map(|_| rng.sample(Open01)).collect()))
}

pub fn gen_monotone(length: usize) -> Result<TimeSeries, SynthError> {
    if length < 2 {
        return Err(SynthError::LengthTooShort(length));
    }
    Ok(series((1..=length).map(|i| i as f64).collect()))
}

/// Davies–Harte synthesis on an embedding of size `2n`.
pub(crate) fn fgn_circulant(config: &FbmConfig) -> Result<Vec<f64>, SynthError> {
    let n = config.length;
    let m = 2 * n;
    let mut row: Vec<Complex64> = (0..m)
        .map(|i| {
            let lag = if i <= n { i } else { m - i };
            Complex64::new(fgn_autocovariance(config.hurst, lag), 0.0)
        })
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut row);

    let largest = row.iter().map(|c| c.re).fold(0.0, f64::max);
    let mut scale = Vec::with_capacity(m);
    for c in &row {
        if c.re < -1e-10 * largest {
            return Err(SynthError::EmbeddingNotPositiveDefinite {
                hurst: config.hurst,
                length: n,
            });
        }
        scale.push((c.re.max(0.0) / m as f64).sqrt());
    }

    let mut rng = rng(config.seed);
    let mut buf: Vec<Complex64> = scale
        .iter()
        .map(|&s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        })
        .collect();
    fft.process(&mut buf);
    // Real and imaginary parts are independent draws with the target
    // covariance; the real part is used.
    Ok(buf[..n].iter().map(|c| c.re).collect())
}

/// Row-major lower Cholesky factor of the `n x n` fGn covariance matrix.
fn cholesky_factor(hurst: f64, n: usize) -> Option<Vec<f64>> {
    let gamma: Vec<f64> = (0..n).map(|k| fgn_autocovariance(hurst, k)).collect();
    let mut lower = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|k| lower[i * n + k] * lower[j * n + k]).sum();
            let a = gamma[i - j] - dot;
            if i == j {
                if a <= 0.0 {
                    return None;
                }
                lower[i * n + i] = a.sqrt();
            } else {
                lower[i * n + j] = a / lower[j * n + j];
            }
        }
    }
    Some(lower)
}

/// Exact synthesis through the Cholesky factor of the covariance.
pub(crate) fn fgn_cholesky(config: &FbmConfig) -> Result<Vec<f64>, SynthError> {
    let n = config.length;
    let lower =
        cholesky_factor(config.hurst, n).ok_or(SynthError::EmbeddingNotPositiveDefinite {
            hurst: config.hurst,
            length: n,
        })?;
    let mut rng = rng(config.seed);
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok((0..n)
        .map(|i| (0..=i).map(|k| lower[i * n + k] * z[k]).sum())
        .collect())
}
