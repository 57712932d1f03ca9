//! Sliding-window eigen-analysis: the largest eigenvalue's share of the
//! trace, tracked as a fixed-length window advances one quarter at a time.

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{IngestError, Panel};
use crate::quarter::Quarter;
use crate::rmt::{self, RmtError};

/// Eight years of quarterly observations.
pub const DEFAULT_WINDOW: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RollingError {
    #[error("window of {window} quarters is longer than the {t}-quarter sample")]
    WindowTooLong { window: usize, t: usize },
    #[error("window of {window} quarters needs at least {} for {n} series", n + 1)]
    SubsetTooLarge { n: usize, window: usize },
    #[error("no windows to summarize")]
    EmptySummary,
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Rmt(#[from] RmtError),
}

/// Which sample the rows are standardized over before each window's matrix
/// is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardizationScope {
    /// Every window is re-standardized on its own observations.
    #[default]
    Window,
    /// Rows are standardized once over the full sample; each window's matrix
    /// is then `(1/w) Z Zᵀ` of those globally standardized values.
    WholeSample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowResult {
    pub start: Quarter,
    pub end: Quarter,
    pub lambda_max: f64,
    /// `λ_max` over the trace of the window matrix. The trace is exactly `n`
    /// under window-local standardization.
    pub fraction: f64,
    pub ipr_top: f64,
    pub participation_top: f64,
    pub n: usize,
    pub t: usize,
}

/// Rolling analysis with window-local standardization. An empty `subset`
/// uses every row of the panel.
pub fn rolling_analysis<S: AsRef<str>>(
    panel: &Panel,
    window_quarters: usize,
    subset: &[S],
) -> Result<Vec<WindowResult>, RollingError> {
    rolling_analysis_with(panel, window_quarters, subset, StandardizationScope::Window)
}

pub fn rolling_analysis_with<S: AsRef<str>>(
    panel: &Panel,
    window_quarters: usize,
    subset: &[S],
    scope: StandardizationScope,
) -> Result<Vec<WindowResult>, RollingError> {
    let panel = panel.select(subset)?;
    let (n, t) = (panel.n(), panel.t());
    if window_quarters > t {
        return Err(RollingError::WindowTooLong { window: window_quarters, t });
    }
    if window_quarters < n + 1 {
        return Err(RollingError::SubsetTooLarge { n, window: window_quarters });
    }
    let global = match scope {
        StandardizationScope::Window => None,
        StandardizationScope::WholeSample => Some(panel.standardize()?),
    };
    (0..=t - window_quarters)
        .map(|offset| {
            let entries = match &global {
                None => {
                    let w = panel.window(offset, window_quarters)?.standardize()?;
                    rmt::correlation(&w)?.entries().to_vec()
                }
                Some(z) => second_moment(z, offset, window_quarters),
            };
            let (values, vectors) = rmt::symmetric_eigen(n, &entries)?;
            let trace: f64 = (0..n).map(|i| entries[i * n + i]).sum();
            let lambda_max = values[0];
            let ipr_top = rmt::ipr(&vectors[0])?;
            let start = panel.start().offset(offset as i64);
            Ok(WindowResult {
                start,
                end: start.offset(window_quarters as i64 - 1),
                lambda_max,
                fraction: lambda_max / trace,
                ipr_top,
                participation_top: 1.0 / ipr_top,
                n,
                t: window_quarters,
            })
        })
        .collect()
}

fn second_moment(z: &Panel, offset: usize, len: usize) -> Vec<f64> {
    let n = z.n();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let a = &z.row(i)[offset..offset + len];
            let b = &z.row(j)[offset..offset + len];
            let m = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / len as f64;
            out[i * n + j] = m;
            out[j * n + i] = m;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

pub fn summarize_fractions(results: &[WindowResult]) -> Result<FractionSummary, RollingError> {
    if results.is_empty() {
        return Err(RollingError::EmptySummary);
    }
    let fractions = results.iter().map(|r| r.fraction);
    let min = fractions.clone().fold(f64::INFINITY, f64::min);
    let max = fractions.clone().fold(f64::NEG_INFINITY, f64::max);
    let mean = fractions.sum::<f64>() / results.len() as f64;
    Ok(FractionSummary { min, mean, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::NormalSource;

    fn random_panel(n: usize, t: usize, seed: u64) -> Panel {
        let mut src = NormalSource::new(seed);
        let rows = (0..n).map(|_| src.normals(t)).collect();
        Panel::new((0..n).map(|i| format!("C{i}")).collect(), "1981Q1".parse().unwrap(), rows).unwrap()
    }

    fn result(fraction: f64) -> WindowResult {
        WindowResult {
            start: "2000Q1".parse().unwrap(),
            end: "2007Q4".parse().unwrap(),
            lambda_max: fraction * 4.0,
            fraction,
            ipr_top: 0.25,
            participation_top: 4.0,
            n: 4,
            t: 32,
        }
    }

    #[test]
    fn quarterly_1981_to_2008_window_count_and_endpoints() {
        let p = random_panel(8, 109, 1);
        let res = rolling_analysis::<&str>(&p, 32, &[]).unwrap();
        assert_eq!(res.len(), 78);
        assert_eq!(res[0].start.to_string(), "1981Q1");
        assert_eq!(res[0].end.to_string(), "1988Q4");
        assert_eq!(res[1].start.to_string(), "1981Q2");
        assert_eq!(res[1].end.to_string(), "1989Q1");
        assert_eq!(res[77].start.to_string(), "2000Q2");
        assert_eq!(res[77].end.to_string(), "2008Q1");
        for r in &res {
            assert_eq!(r.end.since(r.start) + 1, r.t as i64);
            assert!(r.fraction >= 1.0 / 8.0 - 1e-12 && r.fraction <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn identical_rows_give_full_fraction() {
        let mut src = NormalSource::new(4);
        let row = src.normals(50);
        let p = Panel::new(
            vec!["A".into(), "B".into(), "C".into()],
            "1990Q1".parse().unwrap(),
            vec![row.clone(), row.clone(), row],
        )
        .unwrap();
        for r in rolling_analysis::<&str>(&p, 20, &[]).unwrap() {
            assert!((r.fraction - 1.0).abs() < 1e-12);
            assert!((r.participation_top - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn preconditions() {
        let p = random_panel(6, 40, 2);
        assert_eq!(
            rolling_analysis::<&str>(&p, 41, &[]).unwrap_err(),
            RollingError::WindowTooLong { window: 41, t: 40 }
        );
        assert_eq!(rolling_analysis::<&str>(&p, 6, &[]).unwrap_err(), RollingError::SubsetTooLarge { n: 6, window: 6 });
        assert!(rolling_analysis(&p, 6, &["C0", "C1"]).is_ok());
        assert!(matches!(rolling_analysis(&p, 10, &["C0", "nope"]), Err(RollingError::Ingest(_))));
    }

    #[test]
    fn single_window_scopes_agree() {
        let p = random_panel(5, 30, 9);
        let a = rolling_analysis::<&str>(&p, 30, &[]).unwrap();
        let b = rolling_analysis_with::<&str>(&p, 30, &[], StandardizationScope::WholeSample).unwrap();
        assert_eq!(a.len(), 1);
        assert!((a[0].fraction - b[0].fraction).abs() < 1e-12);
    }

    #[test]
    fn summary() {
        let s = summarize_fractions(&[result(0.5), result(0.7)]).unwrap();
        assert_eq!((s.min, s.max), (0.5, 0.7));
        assert!((s.mean - 0.6).abs() < 1e-15);
        let s = summarize_fractions(&[result(0.42)]).unwrap();
        assert_eq!((s.min, s.mean, s.max), (0.42, 0.42, 0.42));
        assert_eq!(summarize_fractions(&[]).unwrap_err(), RollingError::EmptySummary);
    }
}
