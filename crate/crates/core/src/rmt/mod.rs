//! Random-matrix analysis of a correlation matrix: construction, spectral
//! decomposition, the Marchenko–Pastur noise band and eigenvector statistics.

mod correlation;
mod eigen;
mod marchenko_pastur;
mod modes;

pub use correlation::{correlation, CorrelationMatrix};
pub use eigen::{eigen, symmetric_eigen, EigenSystem, MAX_QL_ITERATIONS};
pub use marchenko_pastur::{mp_band, mp_cdf, mp_density, MpBand};
pub use modes::{classify_modes, ipr, market_fraction, participation_ratio, ModeClass, ModePartition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RmtError {
    #[error("correlation requires a standardized panel")]
    Unstandardized,
    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),
    #[error("eigensolver failed to converge after {iterations} iterations on eigenvalue {index}")]
    NoConvergence { index: usize, iterations: usize },
    #[error("matrix is not positive semi-definite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemiDefinite { eigenvalue: f64 },
    #[error("Marchenko-Pastur band needs t >= n >= 1 and sigma2 > 0 (n={n}, t={t}, sigma2={sigma2})")]
    InvalidBand { n: usize, t: usize, sigma2: f64 },
    #[error("vector norm {norm} is not 1")]
    NonUnitVector { norm: f64 },
    #[error("empty vector")]
    EmptyVector,
}
