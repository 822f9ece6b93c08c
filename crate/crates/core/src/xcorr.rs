//! Lagged Pearson cross-correlation of paired series.
//!
//! Each lag uses the mean and variance of its own overlap window, so every
//! coefficient is a true correlation in [-1, 1]. Series are used as given:
//! trends are not removed and will inflate the coefficients.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{format_f64, TimeSeries};

pub const DEFAULT_MAX_LAG: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcfResult<T> {
    /// `-max_lag..=max_lag`. Positive lag: `b` trails `a`.
    pub lags: Vec<i64>,
    pub coefficients: Vec<T>,
    /// White-noise ±3/√(n-|k|) band per lag.
    pub band: Vec<T>,
    pub peak_lag: i64,
    /// Largest |coefficient|.
    pub peak_value: T,
}

impl<T: Scalar> CcfResult<T> {
    pub fn at(&self, lag: i64) -> Option<T> {
        self.lags.iter().position(|&l| l == lag).map(|i| self.coefficients[i])
    }

    /// CSV with columns `lag,ccf,band`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,ccf,band\n");
        for ((lag, c), b) in self.lags.iter().zip(&self.coefficients).zip(&self.band) {
            out.push_str(&format!(
                "{lag},{},{}\n",
                format_f64(c.as_f64()),
                format_f64(b.as_f64())
            ));
        }
        out
    }
}

/// Pearson correlation of two equal-length slices; `None` if either is
/// constant.
fn correlate<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    debug_assert_eq!(x.len(), y.len());
    let constant = |s: &[T]| s.iter().all(|&v| v == s[0]);
    if x.is_empty() || constant(x) || constant(y) {
        return None;
    }
    let n = T::from_count(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx = sxx + da * da;
        syy = syy + db * db;
        sxy = sxy + da * db;
    }
    if sxx == T::zero() || syy == T::zero() {
        return None;
    }
    let r = sxy / (sxx * syy).sqrt();
    Some(r.max(-T::one()).min(T::one()))
}

/// Overlap windows of `a` and `b` at `lag`: pairs `(a[t], b[t + lag])`.
fn windows<'a, T>(a: &'a [T], b: &'a [T], lag: i64) -> (&'a [T], &'a [T]) {
    let n = a.len();
    let k = lag.unsigned_abs() as usize;
    if lag >= 0 {
        (&a[..n - k], &b[k..])
    } else {
        (&a[k..], &b[..n - k])
    }
}

pub fn pearson<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: a.len(),
        });
    }
    correlate(a.values(), b.values()).ok_or(Error::ZeroVariance(0))
}

pub fn cross_correlation<T: Scalar>(
    a: &TimeSeries<T>,
    b: &TimeSeries<T>,
    max_lag: usize,
) -> Result<CcfResult<T>> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::LengthMismatch(n, b.len()));
    }
    if n < max_lag + 3 {
        return Err(Error::LagTooLarge { max_lag, len: n });
    }
    let l = max_lag as i64;
    let lags: Vec<i64> = (-l..=l).collect();
    let coefficients = lags
        .par_iter()
        .map(|&lag| {
            let (x, y) = windows(a.values(), b.values(), lag);
            correlate(x, y).ok_or(Error::ZeroVariance(lag))
        })
        .collect::<Result<Vec<T>>>()?;
    let band = lags
        .iter()
        .map(|&lag| T::lit(3.0) / T::from_count(n - lag.unsigned_abs() as usize).sqrt())
        .collect();

    // Lags are visited by increasing |k|, negative first, so a strict `>`
    // keeps the preferred lag on ties.
    let mut order: Vec<usize> = (0..lags.len()).collect();
    order.sort_by_key(|&i| (lags[i].abs(), lags[i] > 0));
    let mut best = order[0];
    for &i in &order[1..] {
        if coefficients[i].abs() > coefficients[best].abs() {
            best = i;
        }
    }
    Ok(CcfResult {
        peak_lag: lags[best],
        peak_value: coefficients[best].abs(),
        lags,
        coefficients,
        band,
    })
}
