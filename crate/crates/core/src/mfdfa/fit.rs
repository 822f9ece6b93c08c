use serde::Serialize;

use super::config::MIN_TAU_POINTS;
use super::fluctuation::FluctuationTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::format_f64;

/// Ordinary least-squares straight line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// OLS fit of `ys` on `xs`. `r_squared` is 1 when `ys` is constant.
pub fn ols_line<T: Scalar>(xs: &[T], ys: &[T]) -> Option<LineFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = T::from_count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        (T::one() - sse / syy).max(T::zero())
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Generalized Hurst exponents h(q) with fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurstSpectrum<T> {
    pub q_grid: Vec<T>,
    pub h: Vec<T>,
    pub r_squared: Vec<T>,
    /// h(2); absent when 2 is not on the q grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hurst: Option<T>,
    /// h(q_min) - h(q_max).
    pub delta_h: T,
    /// Scales that entered the regression.
    pub fit_taus: Vec<usize>,
}

impl<T: Scalar> HurstSpectrum<T> {
    pub fn h_at(&self, q: T) -> Option<T> {
        self.q_grid.iter().position(|&v| v == q).map(|i| self.h[i])
    }

    pub fn h_min_q(&self) -> (T, T) {
        (self.q_grid[0], self.h[0])
    }

    pub fn h_max_q(&self) -> (T, T) {
        let last = self.q_grid.len() - 1;
        (self.q_grid[last], self.h[last])
    }

    /// CSV with columns `q,h,r2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,h,r2\n");
        for ((q, h), r2) in self.q_grid.iter().zip(&self.h).zip(&self.r_squared) {
            out.push_str(&format!(
                "{},{},{}\n",
                format_f64(q.as_f64()),
                format_f64(h.as_f64()),
                format_f64(r2.as_f64())
            ));
        }
        out
    }
}

/// Slopes of ln F_q(τ) against ln τ, one per q, over the scales inside the
/// inclusive `fit_range` (all scales when `None`).
pub fn fit_scaling<T: Scalar>(
    table: &FluctuationTable<T>,
    fit_range: Option<(usize, usize)>,
) -> Result<HurstSpectrum<T>> {
    let cols: Vec<usize> = table
        .tau_grid
        .iter()
        .enumerate()
        .filter(|(_, &t)| fit_range.is_none_or(|(lo, hi)| lo <= t && t <= hi))
        .map(|(i, _)| i)
        .collect();
    if cols.len() < MIN_TAU_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_TAU_POINTS,
            got: cols.len(),
        });
    }
    if table.q_grid.is_empty() {
        return Err(Error::ConfigInvalid("q grid is empty".into()));
    }
    let log_tau: Vec<T> = cols.iter().map(|&c| T::from_count(table.tau_grid[c]).ln()).collect();

    let mut h = Vec::with_capacity(table.q_grid.len());
    let mut r_squared = Vec::with_capacity(table.q_grid.len());
    for (qi, &q) in table.q_grid.iter().enumerate() {
        let mut log_f = Vec::with_capacity(cols.len());
        for &c in &cols {
            let f = table.get(qi, c);
            if !(f > T::zero() && f.is_finite()) {
                return Err(Error::NonFiniteLog {
                    q: q.as_f64(),
                    tau: table.tau_grid[c],
                });
            }
            log_f.push(f.ln());
        }
        let line = ols_line(&log_tau, &log_f).ok_or(Error::InsufficientPoints {
            needed: MIN_TAU_POINTS,
            got: cols.len(),
        })?;
        h.push(line.slope);
        r_squared.push(line.r_squared);
    }

    let hurst = table
        .q_grid
        .iter()
        .position(|&q| q == T::lit(2.0))
        .map(|i| h[i]);
    // q_grid is strictly increasing, so its ends are q_min and q_max.
    let delta_h = h[0] - h[h.len() - 1];
    Ok(HurstSpectrum {
        q_grid: table.q_grid.clone(),
        h,
        r_squared,
        hurst,
        delta_h,
        fit_taus: cols.iter().map(|&c| table.tau_grid[c]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_table(exponents: &[f64], taus: &[usize]) -> FluctuationTable<f64> {
        let q: Vec<f64> = (0..exponents.len()).map(|i| i as f64 - 2.0).collect();
        let values = exponents
            .iter()
            .map(|&e| taus.iter().map(|&t| 3.0 * (t as f64).powf(e)).collect())
            .collect();
        FluctuationTable::from_parts(q, taus.to_vec(), values, 1).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let taus = [10, 16, 25, 40, 64, 100];
        let table = power_table(&[0.7; 5], &taus);
        let s = fit_scaling(&table, None).unwrap();
        for (&h, &r2) in s.h.iter().zip(&s.r_squared) {
            assert!((h - 0.7).abs() < 1e-12);
            assert!((r2 - 1.0).abs() < 1e-12);
        }
        assert!(s.delta_h.abs() < 1e-12);
        assert!((s.hurst.unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn fit_range_restricts_scales() {
        let taus = [10, 16, 25, 40, 64, 100];
        let table = power_table(&[0.9, 0.8, 0.7, 0.6, 0.5], &taus);
        let s = fit_scaling(&table, Some((16, 64))).unwrap();
        assert_eq!(s.fit_taus, vec![16, 25, 40, 64]);
        assert!((s.delta_h - 0.4).abs() < 1e-12);
        assert_eq!(
            fit_scaling(&table, Some((16, 40))).unwrap_err(),
            Error::InsufficientPoints { needed: 4, got: 3 }
        );
    }

    #[test]
    fn hurst_absent_without_q_two() {
        let taus = [10, 16, 25, 40];
        let mut table = power_table(&[0.6, 0.5], &taus);
        table.q_grid = vec![-1.0, 1.0];
        let s = fit_scaling(&table, None).unwrap();
        assert_eq!(s.hurst, None);
    }

    #[test]
    fn non_positive_entry() {
        let taus = [10, 16, 25, 40];
        let mut table = power_table(&[0.6], &taus);
        table.values[0][2] = 0.0;
        assert!(matches!(fit_scaling(&table, None), Err(Error::NonFiniteLog { tau: 25, .. })));
    }

    #[test]
    fn ols_known_line() {
        let fit = ols_line(&[1.0_f64, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-15);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        let noisy = ols_line(&[1.0_f64, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((noisy.r_squared - 0.64).abs() < 1e-14);
        assert!(ols_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }
}
