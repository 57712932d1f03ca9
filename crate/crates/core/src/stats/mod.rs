//! Distributional tests, spectral estimation and Monte Carlo validation of
//! the Marchenko–Pastur law.

mod ks;
mod monte_carlo;
mod periodogram;

pub use ks::{kolmogorov_survival, ks_two_sample, KsResult};
pub use monte_carlo::{mp_monte_carlo, HistogramBin, MpMonteCarlo, MP_CDF_THRESHOLD, MP_OUTSIDE_THRESHOLD};
pub use periodogram::{periodogram, periodogram_with, PeriodogramOptions, SpectrumEstimate};

use thiserror::Error;

use crate::ingest::IngestError;
use crate::rmt::RmtError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains non-finite values")]
    NonFinite,
    #[error("series has {len} observations; at least {min} required")]
    SeriesTooShort { len: usize, min: usize },
    #[error("invalid smoothing span {0}: modified Daniell spans must be odd and at least 3")]
    InvalidSpan(usize),
    #[error("taper proportion {0} outside [0, 0.5]")]
    InvalidTaper(f64),
    #[error("invalid Monte Carlo setup: {0}")]
    InvalidMonteCarlo(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Rmt(#[from] RmtError),
}
