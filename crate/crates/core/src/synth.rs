//! Synthetic processes with known scaling, used as estimator oracles.
//!
//! Every generator draws from a ChaCha20 stream (`rand_chacha::ChaCha20Rng`)
//! seeded with `seed_from_u64(seed)`, and normals come from the ziggurat
//! sampler in `rand_distr::StandardNormal`. FFTs use the scalar (non-SIMD)
//! rustfft planner so output does not depend on the host's vector units.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlannerScalar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Tolerance below zero within which circulant eigenvalues are clamped.
pub const EIGEN_CLAMP: f64 = 1e-10;

pub const MAX_CASCADE_LEVELS: u32 = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    WhiteNoise { length: usize, seed: u64 },
    Fgn { h: f64, length: usize, seed: u64 },
    Cascade { p: f64, levels: u32, seed: u64 },
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::WhiteNoise { length, .. } => check_length(length),
            GeneratorSpec::Fgn { h, length, .. } => {
                check_length(length)?;
                if !(h > 0.0 && h < 1.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "Hurst exponent must satisfy 0 < H < 1, got {h}"
                    )));
                }
                Ok(())
            }
            GeneratorSpec::Cascade { p, levels, .. } => {
                if !(p > 0.0 && p <= 0.5) {
                    return Err(Error::InvalidGenerator(format!(
                        "cascade weight must satisfy 0 < p <= 0.5, got {p}"
                    )));
                }
                if levels == 0 || levels > MAX_CASCADE_LEVELS {
                    return Err(Error::InvalidGenerator(format!(
                        "cascade levels must be in 1..={MAX_CASCADE_LEVELS}, got {levels}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn length(&self) -> usize {
        match *self {
            GeneratorSpec::WhiteNoise { length, .. } | GeneratorSpec::Fgn { length, .. } => length,
            GeneratorSpec::Cascade { levels, .. } => 1usize << levels,
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            GeneratorSpec::WhiteNoise { seed, .. }
            | GeneratorSpec::Fgn { seed, .. }
            | GeneratorSpec::Cascade { seed, .. } => seed,
        }
    }

    pub fn generate(&self) -> Result<TimeSeries<f64>> {
        match *self {
            GeneratorSpec::WhiteNoise { length, seed } => white_noise(length, seed),
            GeneratorSpec::Fgn { h, length, seed } => fgn(h, length, seed),
            GeneratorSpec::Cascade { p, levels, seed } => cascade(p, levels, seed),
        }
    }
}

fn check_length(length: usize) -> Result<()> {
    if length == 0 {
        return Err(Error::InvalidGenerator("length must be at least 1".into()));
    }
    Ok(())
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// I.i.d. standard Gaussian samples.
pub fn white_noise(length: usize, seed: u64) -> Result<TimeSeries<f64>> {
    check_length(length)?;
    let mut rng = rng(seed);
    let values = (0..length).map(|_| rng.sample(StandardNormal)).collect();
    TimeSeries::new("white_noise", values)
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(h: f64, k: usize) -> f64 {
    let k = k as f64;
    let e = 2.0 * h;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Fractional Gaussian noise by circulant embedding (Davies–Harte).
///
/// The first row `γ(0), γ(1), …, γ(n), γ(n-1), …, γ(1)` of a 2n circulant is
/// diagonalised by FFT; complex Gaussian weights scaled by the square-rooted
/// eigenvalues are transformed back, and the first `n` real parts are an exact
/// draw. Normals are consumed in the order Z₀, (U_k, V_k) for k = 1..n-1, Z_n.
pub fn fgn(h: f64, length: usize, seed: u64) -> Result<TimeSeries<f64>> {
    GeneratorSpec::Fgn { h, length, seed }.validate()?;
    let n = length;
    let mut rng = rng(seed);
    if n == 1 {
        return TimeSeries::new("fgn", vec![rng.sample(StandardNormal)]);
    }
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = if j <= n { j } else { m - j };
            Complex::new(fgn_autocovariance(h, lag), 0.0)
        })
        .collect();
    let fft = FftPlannerScalar::new().plan_fft_forward(m);
    fft.process(&mut row);

    let mut eigen = Vec::with_capacity(m);
    for (index, c) in row.iter().enumerate() {
        let lambda = c.re;
        if lambda < -EIGEN_CLAMP {
            return Err(Error::EmbeddingFailure {
                index,
                eigenvalue: lambda,
            });
        }
        eigen.push(lambda.max(0.0));
    }

    let mf = m as f64;
    let mut w = vec![Complex::new(0.0, 0.0); m];
    w[0] = Complex::new((eigen[0] / mf).sqrt() * rng.sample::<f64, _>(StandardNormal), 0.0);
    for k in 1..n {
        let scale = (eigen[k] / (2.0 * mf)).sqrt();
        let u: f64 = rng.sample(StandardNormal);
        let v: f64 = rng.sample(StandardNormal);
        w[k] = Complex::new(scale * u, scale * v);
        w[m - k] = w[k].conj();
    }
    w[n] = Complex::new((eigen[n] / mf).sqrt() * rng.sample::<f64, _>(StandardNormal), 0.0);
    fft.process(&mut w);

    TimeSeries::new("fgn", w[..n].iter().map(|c| c.re).collect())
}

/// Binomial multiplicative cascade of `2^levels` cells carrying unit mass.
///
/// Each split hands fraction `p` to one half and `1 - p` to the other; which
/// half gets `p` is a fair coin from the seeded stream, drawn left to right
/// level by level.
pub fn cascade(p: f64, levels: u32, seed: u64) -> Result<TimeSeries<f64>> {
    GeneratorSpec::Cascade { p, levels, seed }.validate()?;
    let mut rng = rng(seed);
    let q = 1.0 - p;
    let mut mass = vec![1.0_f64];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(mass.len() * 2);
        for &cell in &mass {
            let (left, right) = if rng.random::<bool>() { (p, q) } else { (q, p) };
            next.push(cell * left);
            next.push(cell * right);
        }
        mass = next;
    }
    TimeSeries::new("cascade", mass)
}

/// Closed-form generalized Hurst exponent of the binomial cascade:
/// `1/q - ln(p^q + (1-p)^q) / (q ln 2)`. The q → 0 limit is used at q = 0.
pub fn cascade_hurst(p: f64, q: f64) -> f64 {
    let r = 1.0 - p;
    if q == 0.0 {
        // Limit of the expression as q → 0.
        return -(p.ln() + r.ln()) / (2.0 * std::f64::consts::LN_2);
    }
    1.0 / q - (p.powf(q) + r.powf(q)).ln() / (q * std::f64::consts::LN_2)
}
