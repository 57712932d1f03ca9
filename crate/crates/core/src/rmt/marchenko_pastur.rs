use std::f64::consts::PI;

use serde::Serialize;

use super::RmtError;

/// Theoretical eigenvalue support of a random correlation matrix with
/// ratio `q = T/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpBand {
    pub q: f64,
    pub sigma2: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl MpBand {
    /// Band for a real-valued ratio `q >= 1`.
    pub fn from_ratio(q: f64, sigma2: f64) -> Option<Self> {
        if !(q >= 1.0 && q.is_finite() && sigma2 > 0.0 && sigma2.is_finite()) {
            return None;
        }
        let root = 1.0 / q.sqrt();
        Some(MpBand {
            q,
            sigma2,
            lambda_minus: sigma2 * (1.0 - root).powi(2),
            lambda_plus: sigma2 * (1.0 + root).powi(2),
        })
    }

    /// Closed interval test; the edges count as inside.
    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.lambda_minus && lambda <= self.lambda_plus
    }

    pub fn width(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }
}

pub fn mp_band(n: usize, t: usize, sigma2: f64) -> Result<MpBand, RmtError> {
    if n == 0 || t < n {
        return Err(RmtError::InvalidBand { n, t, sigma2 });
    }
    MpBand::from_ratio(t as f64 / n as f64, sigma2).ok_or(RmtError::InvalidBand { n, t, sigma2 })
}

/// Marchenko–Pastur eigenvalue density; zero outside the open band.
pub fn mp_density(lambda: f64, band: &MpBand) -> f64 {
    if !(lambda > band.lambda_minus && lambda < band.lambda_plus) {
        return 0.0;
    }
    band.q / (2.0 * PI * band.sigma2) * ((band.lambda_plus - lambda) * (lambda - band.lambda_minus)).sqrt() / lambda
}

const CDF_NODES: usize = 4096;

/// Cumulative distribution of [`mp_density`], by midpoint quadrature after
/// the substitution `λ = λ⁻ + w (1 - cos θ)`, which removes the square-root
/// edge behaviour.
pub fn mp_cdf(lambda: f64, band: &MpBand) -> f64 {
    if lambda <= band.lambda_minus {
        return 0.0;
    }
    if lambda >= band.lambda_plus {
        return 1.0;
    }
    let w = band.width() / 2.0;
    let theta_end = (1.0 - (lambda - band.lambda_minus) / w).clamp(-1.0, 1.0).acos();
    let h = theta_end / CDF_NODES as f64;
    let scale = band.q / (2.0 * PI * band.sigma2);
    let sum: f64 = (0..CDF_NODES)
        .map(|k| {
            let theta = (k as f64 + 0.5) * h;
            let (s, c) = theta.sin_cos();
            let x = band.lambda_minus + w * (1.0 - c);
            scale * w * w * s * s / x
        })
        .sum();
    (sum * h).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eu8_band() {
        let b = mp_band(8, 109, 1.0).unwrap();
        assert!((b.q - 13.625).abs() < 1e-15);
        assert!((b.lambda_minus - 0.5316).abs() < 5e-5, "{}", b.lambda_minus);
        assert!((b.lambda_plus - 1.6152).abs() < 5e-5, "{}", b.lambda_plus);
        // the published figures are truncated, not rounded, to two decimals
        let truncate = |x: f64| (x * 100.0).floor() / 100.0;
        assert_eq!((truncate(b.lambda_minus), truncate(b.lambda_plus)), (0.53, 1.61));
    }

    #[test]
    fn exact_cases() {
        let b = mp_band(5, 5, 1.0).unwrap();
        assert_eq!((b.lambda_minus, b.lambda_plus), (0.0, 4.0));
        let b = mp_band(25, 100, 1.0).unwrap();
        assert_eq!((b.lambda_minus, b.lambda_plus), (0.25, 2.25));
        let b = mp_band(25, 100, 2.0).unwrap();
        assert_eq!((b.lambda_minus, b.lambda_plus), (0.5, 4.5));
    }

    #[test]
    fn refuses_q_below_one() {
        assert!(mp_band(10, 9, 1.0).is_err());
        assert!(mp_band(0, 9, 1.0).is_err());
        assert!(mp_band(3, 9, 0.0).is_err());
        assert!(mp_band(3, 9, f64::NAN).is_err());
    }

    #[test]
    fn density_values() {
        let b = mp_band(1, 1, 1.0).unwrap();
        assert!((mp_density(2.0, &b) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(mp_density(b.lambda_plus, &b), 0.0);
        assert_eq!(mp_density(b.lambda_minus, &b), 0.0);
        assert_eq!(mp_density(5.0, &b), 0.0);
        assert_eq!(mp_density(-1.0, &b), 0.0);
        let b = mp_band(8, 109, 1.0).unwrap();
        assert_eq!(mp_density(0.3, &b), 0.0);
        assert_eq!(mp_density(b.lambda_minus, &b), 0.0);
    }

    #[test]
    fn cdf_endpoints_and_monotone() {
        for q in [1.0, 2.0, 4.0, 13.625] {
            let b = MpBand::from_ratio(q, 1.0).unwrap();
            assert_eq!(mp_cdf(b.lambda_minus, &b), 0.0);
            assert_eq!(mp_cdf(b.lambda_plus, &b), 1.0);
            let just_below = mp_cdf(b.lambda_plus - 1e-12, &b);
            assert!((just_below - 1.0).abs() < 1e-6, "q={q}: {just_below}");
            let mut prev = 0.0;
            for k in 1..100 {
                let c = mp_cdf(b.lambda_minus + b.width() * k as f64 / 100.0, &b);
                assert!(c >= prev);
                prev = c;
            }
        }
    }
}
