use rayon::prelude::*;
use serde::Serialize;

use super::config::AnalysisConfig;
use super::detrend::PolyDetrender;
use super::segment::SegmentLayout;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{format_f64, Profile};

/// F_q(τ) over a (q, τ) grid. Rows follow `q_grid`, columns `tau_grid`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationTable<T> {
    pub q_grid: Vec<T>,
    pub tau_grid: Vec<usize>,
    pub values: Vec<Vec<T>>,
    /// Number of segments (both passes) behind each column.
    pub segment_counts: Vec<usize>,
    pub detrend_order: usize,
}

impl<T: Scalar> FluctuationTable<T> {
    /// Assembles a table from precomputed values, checking only its shape.
    pub fn from_parts(
        q_grid: Vec<T>,
        tau_grid: Vec<usize>,
        values: Vec<Vec<T>>,
        detrend_order: usize,
    ) -> Result<Self> {
        if values.len() != q_grid.len() || values.iter().any(|row| row.len() != tau_grid.len()) {
            return Err(Error::ConfigInvalid(format!(
                "table shape does not match {} q values x {} scales",
                q_grid.len(),
                tau_grid.len()
            )));
        }
        let segment_counts = vec![0; tau_grid.len()];
        Ok(Self {
            q_grid,
            tau_grid,
            values,
            segment_counts,
            detrend_order,
        })
    }

    pub fn get(&self, qi: usize, ti: usize) -> T {
        self.values[qi][ti]
    }

    pub fn row(&self, qi: usize) -> &[T] {
        &self.values[qi]
    }

    /// Long-format CSV with columns `q,tau,F`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,tau,F\n");
        for (q, row) in self.q_grid.iter().zip(&self.values) {
            for (tau, f) in self.tau_grid.iter().zip(row) {
                out.push_str(&format!("{},{tau},{}\n", format_f64(q.as_f64()), format_f64(f.as_f64())));
            }
        }
        out
    }
}

/// Per-segment F² values at scale `tau`, in [`SegmentLayout`] order.
pub fn segment_variances<T: Scalar>(
    profile: &Profile<T>,
    tau: usize,
    order: usize,
) -> Result<Vec<T>> {
    let layout = SegmentLayout::for_length(profile.len(), tau)?;
    let detrender = PolyDetrender::new(tau, order)?;
    let y = profile.values();
    layout
        .ranges()
        .map(|r| detrender.mean_square_residual(&y[r]))
        .collect()
}

/// q-th order generalized mean of the segment fluctuations,
/// `[mean((F²)^(q/2))]^(1/q)`, with the geometric mean at q = 0. Evaluated in
/// log space so large |q| cannot overflow.
fn generalized_mean<T: Scalar>(variances: &[T], q: T) -> T {
    let n = T::from_count(variances.len());
    let half = T::lit(0.5);
    if q == T::zero() {
        let sum_ln: T = variances.iter().map(|v| v.ln()).sum();
        return (half * sum_ln / n).exp();
    }
    let exps: Vec<T> = variances.iter().map(|v| q * half * v.ln()).collect();
    let peak = exps.iter().copied().fold(T::neg_infinity(), T::max);
    let acc: T = exps.iter().map(|&e| (e - peak).exp()).sum();
    ((peak + acc.ln() - n.ln()) / q).exp()
}

pub fn fluctuation_function<T: Scalar>(
    profile: &Profile<T>,
    config: &AnalysisConfig<T>,
) -> Result<FluctuationTable<T>> {
    config.validate(profile.len())?;
    let order = config.detrend_order;
    let columns: Vec<Vec<T>> = config
        .tau_grid
        .par_iter()
        .map(|&tau| segment_variances(profile, tau, order))
        .collect::<Result<_>>()?;

    let needs_positive = config.q_grid.iter().any(|&q| q <= T::zero());
    for (&tau, col) in config.tau_grid.iter().zip(&columns) {
        let first_zero = col.iter().position(|&v| v == T::zero());
        if let Some(segment) = first_zero {
            if needs_positive || col.iter().all(|&v| v == T::zero()) {
                return Err(Error::ZeroVarianceSegment { tau, segment });
            }
        }
    }

    let values = config
        .q_grid
        .iter()
        .map(|&q| columns.iter().map(|col| generalized_mean(col, q)).collect())
        .collect();
    Ok(FluctuationTable {
        q_grid: config.q_grid.clone(),
        tau_grid: config.tau_grid.clone(),
        values,
        segment_counts: columns.iter().map(Vec::len).collect(),
        detrend_order: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_profile, TimeSeries};


    #[test]
    fn constant_variances_give_their_root_for_every_q() {
        let c = 2.7_f64;
        for q in [-5.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
            let got = generalized_mean(&[c; 9], q);
            assert!((got - c.sqrt()).abs() < 1e-14, "q = {q}: {got}");
        }
    }

    #[test]
    fn q_two_is_root_mean_square() {
        let v = [0.5, 2.0, 1.25, 3.5];
        let rms = (v.iter().sum::<f64>() / 4.0).sqrt();
        assert!((generalized_mean(&v, 2.0) - rms).abs() < 1e-14);
    }

    #[test]
    fn q_zero_is_geometric() {
        let v = [0.5, 2.0, 1.25, 3.5];
        let geo = (v.iter().map(|x: &f64| x.ln()).sum::<f64>() / 8.0).exp();
        assert!((generalized_mean(&v, 0.0) - geo).abs() < 1e-14);
    }

    #[test]
    fn zero_segment_with_negative_q_is_an_error() {
        // Exactly linear over the first 16 points, irregular afterwards.
        let y: Vec<f64> = (0..64)
            .map(|t| if t < 16 { t as f64 } else { ((t * 37 % 11) as f64 - 5.0) * 0.3 })
            .collect();
        let profile = Profile::from_values(y).unwrap();
        let mut cfg = AnalysisConfig::default_for(64).unwrap();
        cfg.q_grid = vec![-2.0, 2.0];
        cfg.tau_grid = vec![4, 8, 12, 16];
        let err = fluctuation_function(&profile, &cfg).unwrap_err();
        assert!(matches!(err, Error::ZeroVarianceSegment { tau: 4, segment: 0 }), "{err:?}");

        cfg.q_grid = vec![1.0, 2.0];
        assert!(fluctuation_function(&profile, &cfg).is_ok());
    }

    #[test]
    fn constant_series_is_annihilated() {
        let profile = build_profile(&TimeSeries::new("c", vec![1.5; 128]).unwrap()).unwrap();
        let mut cfg = AnalysisConfig::default_for(128).unwrap();
        cfg.q_grid = vec![1.0, 2.0];
        assert!(matches!(
            fluctuation_function(&profile, &cfg),
            Err(Error::ZeroVarianceSegment { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let t = FluctuationTable::from_parts(vec![1.0, 2.0], vec![10, 20], vec![vec![1.0, 2.0], vec![3.0, 4.0]], 1)
            .unwrap();
        let csv = t.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "q,tau,F");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("2.0000000000000000e0,20,4.0000000000000000e0"));
        assert!(FluctuationTable::from_parts(vec![1.0], vec![10, 20], vec![vec![1.0]], 1).is_err());
    }
}
