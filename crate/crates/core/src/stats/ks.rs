use std::f64::consts::PI;

use serde::Serialize;

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sided two-sample Kolmogorov–Smirnov test.
///
/// `D` is exact: both empirical CDFs are walked in merged sorted order and
/// compared after every distinct value. The p-value is the asymptotic
/// Kolmogorov tail at `sqrt(n1 n2 / (n1 + n2)) * D`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n1, n2) = (xs.len(), ys.len());

    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < n1 && j < n2 {
        let x = xs[i].min(ys[j]);
        while i < n1 && xs[i] <= x {
            i += 1;
        }
        while j < n2 && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let effective = (n1 * n2) as f64 / (n1 + n2) as f64;
    Ok(KsResult { d_statistic: d, p_value: kolmogorov_survival(effective.sqrt() * d), n1, n2 })
}

const SERIES_TOL: f64 = 1e-12;

/// `P(K > x)` for the Kolmogorov distribution.
///
/// Uses `2 Σ (-1)^(k-1) exp(-2 k² x²)` for `x >= 1.18` and the equivalent
/// theta-function form `1 - sqrt(2π)/x Σ exp(-(2k-1)² π² / (8 x²))` below it,
/// where the alternating series converges slowly. Both are truncated once a
/// term drops under 1e-12.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    let p = if x < 1.18 {
        let mut sum = 0.0;
        for k in 1.. {
            let odd = (2 * k - 1) as f64;
            let term = (-(odd * odd) * PI * PI / (8.0 * x * x)).exp();
            sum += term;
            if term < SERIES_TOL {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / x * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1.. {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * x * x).exp();
            sum += sign * term;
            sign = -sign;
            if term < SERIES_TOL {
                break;
            }
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}
