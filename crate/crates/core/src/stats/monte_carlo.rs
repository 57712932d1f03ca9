use serde::Serialize;

use super::StatsError;
use crate::ingest::Panel;
use crate::quarter::Quarter;
use crate::random::NormalSource;
use crate::rmt::{self, mp_band, mp_cdf, mp_density, MpBand};

/// Pass threshold for the pooled fraction of eigenvalues outside the band.
pub const MP_OUTSIDE_THRESHOLD: f64 = 0.02;
/// Pass threshold for the sup-distance between binned empirical and theoretical CDFs.
pub const MP_CDF_THRESHOLD: f64 = 0.03;

const BINS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub empirical_density: f64,
    /// Theoretical density at the bin midpoint.
    pub mp_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpMonteCarlo {
    pub n: usize,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    pub band: MpBand,
    pub eigenvalue_count: usize,
    pub below_count: usize,
    pub above_count: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub outside_fraction: f64,
    /// Largest `|F_emp - F_mp|` over the histogram bin edges.
    pub cdf_discrepancy: f64,
    pub histogram: Vec<HistogramBin>,
    pub passed: bool,
}

/// Pools the eigenvalues of `trials` correlation matrices of standardized
/// `n x t` Gaussian panels. Trial `k` draws from seed `seed + k`.
pub fn mp_monte_carlo(n: usize, t: usize, trials: usize, seed: u64) -> Result<MpMonteCarlo, StatsError> {
    if trials == 0 {
        return Err(StatsError::InvalidMonteCarlo("trials must be at least 1".into()));
    }
    if n < 2 || t < n {
        return Err(StatsError::InvalidMonteCarlo(format!("need t >= n >= 2, got n={n}, t={t}")));
    }
    let band = mp_band(n, t, 1.0)?;
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let origin = Quarter::from_index(0);

    let mut eigenvalues = Vec::with_capacity(n * trials);
    for trial in 0..trials {
        let mut src = NormalSource::new(seed.wrapping_add(trial as u64));
        let rows = (0..n).map(|_| src.normals(t)).collect();
        let panel = Panel::new(labels.clone(), origin, rows)?.standardize()?;
        let corr = rmt::correlation(&panel)?;
        eigenvalues.extend_from_slice(rmt::eigen(&corr)?.eigenvalues());
    }
    eigenvalues.sort_by(f64::total_cmp);

    let total = eigenvalues.len();
    let below_count = eigenvalues.partition_point(|&l| l < band.lambda_minus);
    let above_count = total - eigenvalues.partition_point(|&l| l <= band.lambda_plus);
    let width = band.width() / BINS as f64;
    let edge = |k: usize| if k == BINS { band.lambda_plus } else { band.lambda_minus + width * k as f64 };
    let at_or_below = |x: f64| eigenvalues.partition_point(|&l| l <= x);

    let mut histogram = Vec::with_capacity(BINS);
    let mut cdf_discrepancy = (at_or_below(edge(0)) as f64 / total as f64 - mp_cdf(edge(0), &band)).abs();
    for k in 0..BINS {
        let (lower, upper) = (edge(k), edge(k + 1));
        // the first bin is closed on the left so the band edge itself is counted
        let below = if k == 0 { below_count } else { at_or_below(lower) };
        let count = at_or_below(upper) - below;
        histogram.push(HistogramBin {
            lower,
            upper,
            count,
            empirical_density: count as f64 / (total as f64 * (upper - lower)),
            mp_density: mp_density(0.5 * (lower + upper), &band),
        });
        let gap = (at_or_below(upper) as f64 / total as f64 - mp_cdf(upper, &band)).abs();
        cdf_discrepancy = cdf_discrepancy.max(gap);
    }
    let outside_fraction = (below_count + above_count) as f64 / total as f64;
    Ok(MpMonteCarlo {
        n,
        t,
        trials,
        seed,
        band,
        eigenvalue_count: total,
        below_count,
        above_count,
        min_eigenvalue: eigenvalues[0],
        max_eigenvalue: eigenvalues[total - 1],
        outside_fraction,
        cdf_discrepancy,
        histogram,
        passed: outside_fraction < MP_OUTSIDE_THRESHOLD && cdf_discrepancy < MP_CDF_THRESHOLD,
    })
}
