use serde::Serialize;

use super::{EigenSystem, MpBand, RmtError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeClass {
    Below,
    Noise,
    Above,
}

impl ModeClass {
    /// Band edges classify as noise.
    pub fn of(lambda: f64, band: &MpBand) -> Self {
        if lambda > band.lambda_plus {
            ModeClass::Above
        } else if lambda < band.lambda_minus {
            ModeClass::Below
        } else {
            ModeClass::Noise
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeClass::Below => "below",
            ModeClass::Noise => "noise",
            ModeClass::Above => "above",
        }
    }
}

/// Mode indices (into the descending eigenvalue order) grouped by class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ModePartition {
    pub below: Vec<usize>,
    pub noise: Vec<usize>,
    pub above: Vec<usize>,
}

pub fn classify_modes(eig: &EigenSystem, band: &MpBand) -> ModePartition {
    let mut out = ModePartition::default();
    for (alpha, &lambda) in eig.eigenvalues().iter().enumerate() {
        match ModeClass::of(lambda, band) {
            ModeClass::Below => out.below.push(alpha),
            ModeClass::Noise => out.noise.push(alpha),
            ModeClass::Above => out.above.push(alpha),
        }
    }
    out
}

const NORM_TOL: f64 = 1e-8;

/// Inverse participation ratio `Σ v_i⁴` of a unit vector, in `[1/N, 1]`.
pub fn ipr(vector: &[f64]) -> Result<f64, RmtError> {
    if vector.is_empty() {
        return Err(RmtError::EmptyVector);
    }
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= NORM_TOL) {
        return Err(RmtError::NonUnitVector { norm });
    }
    Ok(vector.iter().map(|x| x.powi(4)).sum())
}

/// Effective number of contributing components, `1 / ipr`.
pub fn participation_ratio(vector: &[f64]) -> Result<f64, RmtError> {
    ipr(vector).map(|i| 1.0 / i)
}

/// Share of the trace carried by the largest eigenvalue, `λ_max / N`.
pub fn market_fraction(eig: &EigenSystem) -> f64 {
    eig.lambda_max() / eig.n() as f64
}
