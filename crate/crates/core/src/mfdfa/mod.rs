//! Multifractal detrended fluctuation analysis.
//!
//! The pipeline is profile → bidirectional segmentation → per-segment
//! polynomial detrending → q-order fluctuation function F_q(τ) → log-log
//! slopes h(q). [`analyze`] runs it end to end.
//!
//! Differencing or normalising the input is left to the caller; h(q) is
//! invariant under rescaling of the series.

mod config;
mod detrend;
mod fit;
mod fluctuation;
mod segment;

pub use config::{
    log_spaced_taus, q_range, AnalysisConfig, DEFAULT_ORDER, DEFAULT_TAU_COUNT, DEFAULT_TAU_FLOOR,
    MIN_TAU_POINTS,
};
pub use detrend::{detrend_fluctuation, PolyDetrender};
pub use fit::{fit_scaling, ols_line, HurstSpectrum, LineFit};
pub use fluctuation::{fluctuation_function, segment_variances, FluctuationTable};
pub use segment::{segment, Direction, SegmentLayout};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::{build_profile, TimeSeries};

/// Profile, fluctuation table and scaling fit in one call.
pub fn analyze<T: Scalar>(x: &TimeSeries<T>, config: &AnalysisConfig<T>) -> Result<HurstSpectrum<T>> {
    let table = fluctuation_table(x, config)?;
    fit_scaling(&table, config.fit_range)
}

/// The fluctuation table of `x` (profile built internally).
pub fn fluctuation_table<T: Scalar>(
    x: &TimeSeries<T>,
    config: &AnalysisConfig<T>,
) -> Result<FluctuationTable<T>> {
    let profile = build_profile(x)?;
    fluctuation_function(&profile, config)
}
