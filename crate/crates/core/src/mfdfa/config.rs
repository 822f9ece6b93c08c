use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_ORDER: usize = 1;
pub const DEFAULT_TAU_COUNT: usize = 20;
pub const DEFAULT_TAU_FLOOR: usize = 10;
pub const MIN_TAU_POINTS: usize = 4;

/// Grids and detrending order for one MFDFA run.
///
/// `fit_range` is an inclusive `(tau_lo, tau_hi)` window restricting which
/// scales enter the log-log regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig<T> {
    pub q_grid: Vec<T>,
    pub tau_grid: Vec<usize>,
    pub detrend_order: usize,
    pub fit_range: Option<(usize, usize)>,
}

impl<T: Scalar> AnalysisConfig<T> {
    /// Default grids for a series of length `len`: q in -5..=5, twenty
    /// log-spaced scales between `max(order + 2, 10)` and `len / 4`, linear
    /// detrending.
    pub fn default_for(len: usize) -> Result<Self> {
        Self::with_order(len, DEFAULT_ORDER)
    }

    pub fn with_order(len: usize, order: usize) -> Result<Self> {
        let lo = (order + 2).max(DEFAULT_TAU_FLOOR);
        let hi = len / 4;
        if hi < lo {
            return Err(Error::ConfigInvalid(format!(
                "series of length {len} too short for scales >= {lo} (need tau <= len/4)"
            )));
        }
        let cfg = Self {
            q_grid: q_range(T::lit(-5.0), T::lit(5.0), T::one())?,
            tau_grid: log_spaced_taus(lo, hi, DEFAULT_TAU_COUNT),
            detrend_order: order,
            fit_range: None,
        };
        cfg.validate(len)?;
        Ok(cfg)
    }

    /// Checks the grid invariants against a series of length `len`.
    pub fn validate(&self, len: usize) -> Result<()> {
        if self.q_grid.is_empty() {
            return Err(Error::ConfigInvalid("q grid is empty".into()));
        }
        if self.q_grid.iter().any(|q| !q.is_finite()) {
            return Err(Error::ConfigInvalid("q grid holds a non-finite value".into()));
        }
        if self.q_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ConfigInvalid("q grid must be strictly increasing".into()));
        }
        if self.tau_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ConfigInvalid("tau grid must be strictly increasing".into()));
        }
        if self.tau_grid.len() < MIN_TAU_POINTS {
            return Err(Error::ConfigInvalid(format!(
                "tau grid needs at least {MIN_TAU_POINTS} scales, got {}",
                self.tau_grid.len()
            )));
        }
        let lo = self.detrend_order + 2;
        let hi = len / 4;
        if let Some(&bad) = self.tau_grid.iter().find(|&&t| t < lo || t > hi) {
            return Err(Error::ConfigInvalid(format!(
                "tau = {bad} outside [{lo}, {hi}] for order {} and length {len}",
                self.detrend_order
            )));
        }
        if let Some((a, b)) = self.fit_range {
            if a > b {
                return Err(Error::ConfigInvalid(format!("fit range ({a}, {b}) is reversed")));
            }
        }
        Ok(())
    }

    pub fn q_index(&self, q: T) -> Option<usize> {
        self.q_grid.iter().position(|&v| v == q)
    }
}

/// `min, min + step, ...` up to and including `max`. Each entry is rounded to
/// twelve decimals so that e.g. 2 lands exactly on 2.0 with fractional steps.
pub fn q_range<T: Scalar>(min: T, max: T, step: T) -> Result<Vec<T>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= T::zero() {
        return Err(Error::ConfigInvalid("q range needs finite bounds and step > 0".into()));
    }
    if max < min {
        return Err(Error::ConfigInvalid(format!("q range [{min}, {max}] is empty")));
    }
    let span = ((max - min) / step).as_f64();
    let count = (span + 1e-9).floor() as usize + 1;
    let grid = (0..count)
        .map(|i| {
            let q = min.as_f64() + i as f64 * step.as_f64();
            T::lit((q * 1e12).round() / 1e12)
        })
        .collect();
    Ok(grid)
}

/// `count` integer scales spaced evenly in log between `lo` and `hi`,
/// duplicates removed.
pub fn log_spaced_taus(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count == 0 || hi < lo {
        return Vec::new();
    }
    if count == 1 || lo == hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut taus: Vec<usize> = (0..count)
        .map(|i| {
            let t = (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize;
            t.clamp(lo, hi)
        })
        .collect();
    taus.dedup();
    taus
}
