//! Fractal time-series analysis.
//!
//! * [`series`]: series containers, CSV ingestion, date alignment, profiles.
//! * [`mfdfa`]: detrended fluctuation analysis and its multifractal
//!   generalisation, producing h(q), the Hurst exponent H = h(2) and the
//!   range Δh.
//! * [`synth`]: white noise, fractional Gaussian noise and binomial cascades
//!   with analytically known scaling.
//! * [`xcorr`]: lagged Pearson cross-correlation.
//!
//! The numeric routines are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below pin the common `f64` and `f32` instantiations.

pub mod error;
pub mod mfdfa;
pub mod scalar;
pub mod series;
pub mod synth;
pub mod xcorr;

pub use error::{Error, Result};
pub use mfdfa::{
    analyze, fit_scaling, fluctuation_function, AnalysisConfig, FluctuationTable, HurstSpectrum,
};
pub use scalar::Scalar;
pub use series::{align_by_date, build_profile, load_csv, Column, Profile, TimeSeries};
pub use synth::GeneratorSpec;
pub use xcorr::{cross_correlation, pearson, CcfResult};

pub type Series64 = TimeSeries<f64>;
pub type Series32 = TimeSeries<f32>;
pub type Profile64 = Profile<f64>;
pub type Profile32 = Profile<f32>;
pub type Config64 = AnalysisConfig<f64>;
pub type Config32 = AnalysisConfig<f32>;
pub type Table64 = FluctuationTable<f64>;
pub type Table32 = FluctuationTable<f32>;
pub type Spectrum64 = HurstSpectrum<f64>;
pub type Spectrum32 = HurstSpectrum<f32>;
pub type Ccf64 = CcfResult<f64>;
pub type Ccf32 = CcfResult<f32>;
