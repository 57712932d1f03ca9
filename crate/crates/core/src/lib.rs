//! Business-cycle synchronisation of quarterly GDP panels through the lens
//! of random matrix theory.
//!
//! The pipeline runs from CSV levels ([`ingest`]) to standardized growth
//! panels, their correlation spectrum against the Marchenko–Pastur noise band
//! ([`rmt`]), rolling-window tracking of the dominant eigenmode
//! ([`rolling`]), average-linkage clustering ([`cluster`]) and supporting
//! statistics ([`stats`]).

pub mod cluster;
pub mod ingest;
pub mod quarter;
pub mod random;
pub mod rmt;
pub mod rolling;
pub mod stats;
pub mod synthetic;

pub use cluster::{agglomerate, merge_order, ClusterError, Dendrogram, DistanceMatrix};
pub use ingest::{build_panel, parse_csv, GrowthMethod, IngestError, Panel, QuarterlySeries};
pub use quarter::Quarter;
pub use rmt::{correlation, eigen, mp_band, CorrelationMatrix, EigenSystem, MpBand, RmtError};
pub use rolling::{rolling_analysis, summarize_fractions, RollingError, StandardizationScope, WindowResult};
pub use stats::{ks_two_sample, StatsError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Rmt(#[from] RmtError),
    #[error(transparent)]
    Rolling(#[from] RollingError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl Error {
    /// True for eigensolver convergence failures and non-PSD spectra, as
    /// opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        let rmt = match self {
            Error::Rmt(e) => e,
            Error::Rolling(RollingError::Rmt(e)) => e,
            Error::Stats(StatsError::Rmt(e)) => e,
            _ => return false,
        };
        matches!(rmt, RmtError::NoConvergence { .. } | RmtError::NotPositiveSemiDefinite { .. })
    }
}
