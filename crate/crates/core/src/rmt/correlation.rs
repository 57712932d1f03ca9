use serde::Serialize;

use super::RmtError;
use crate::ingest::Panel;

/// Symmetric `N x N` correlation matrix with unit diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-10;
const RANGE_TOL: f64 = 1e-10;

impl CorrelationMatrix {
    /// Validates symmetry, the unit diagonal and the `[-1, 1]` range.
    pub fn from_entries(labels: Vec<String>, entries: Vec<f64>) -> Result<Self, RmtError> {
        let n = labels.len();
        if n == 0 || entries.len() != n * n {
            return Err(RmtError::InvalidCorrelation(format!("{} entries for {} labels", entries.len(), n)));
        }
        for i in 0..n {
            if (entries[i * n + i] - 1.0).abs() >= DIAGONAL_TOL {
                return Err(RmtError::InvalidCorrelation(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..n {
                let c = entries[i * n + j];
                if !c.is_finite() || c.abs() > 1.0 + RANGE_TOL {
                    return Err(RmtError::InvalidCorrelation(format!("entry ({i},{j}) = {c} out of range")));
                }
                if (c - entries[j * n + i]).abs() >= SYMMETRY_TOL {
                    return Err(RmtError::InvalidCorrelation(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(CorrelationMatrix { labels, entries })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.entries[i * n..(i + 1) * n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i)).sum()
    }
}

/// `C = (1/T) M Mᵀ` over the rows of a standardized panel.
pub fn correlation(panel: &Panel) -> Result<CorrelationMatrix, RmtError> {
    if !panel.is_standardized() {
        return Err(RmtError::Unstandardized);
    }
    let n = panel.n();
    let t = panel.t() as f64;
    let rows = panel.rows();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let c = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum::<f64>() / t;
            entries[i * n + j] = c;
            entries[j * n + i] = c;
        }
    }
    CorrelationMatrix::from_entries(panel.labels().to_vec(), entries)
}
