//! Raw and smoothed periodogram in the style of R's `spec.pgram`: optional
//! linear detrending, optional split-cosine-bell taper, FFT at the Fourier
//! frequencies, then repeated modified-Daniell smoothing.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use super::StatsError;

pub const MIN_LENGTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodogramOptions {
    /// Remove a least-squares line; otherwise only the mean is removed.
    pub detrend: bool,
    /// Modified Daniell spans, applied in turn. Each must be odd and `>= 3`.
    pub spans: Vec<usize>,
    /// Proportion tapered at each end, in `[0, 0.5]`.
    pub taper: f64,
    /// Observations per year, used to express periods in years.
    pub per_year: f64,
}

impl Default for PeriodogramOptions {
    fn default() -> Self {
        PeriodogramOptions { detrend: true, spans: vec![3, 3], taper: 0.0, per_year: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    /// Cycles per observation, `k / T` for `k = 1..=T/2`.
    pub frequencies: Vec<f64>,
    /// Smoothed spectral density.
    pub power: Vec<f64>,
    /// Unsmoothed periodogram at the same frequencies.
    pub raw_power: Vec<f64>,
    pub smoothing: String,
    /// Periods in years spanned by the contiguous band around the peak where
    /// the smoothed power exceeds half its maximum (a heuristic summary).
    pub dominant_period_range: (f64, f64),
    pub len: usize,
}

impl SpectrumEstimate {
    /// Integral of the raw one-sided density over angular frequency; equals
    /// the variance of the (detrended or demeaned) untapered series.
    pub fn total_raw_power(&self) -> f64 {
        let t = self.len;
        let dw = 2.0 * PI / t as f64;
        self.raw_power
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let nyquist = t.is_multiple_of(2) && k + 1 == t / 2;
                if nyquist {
                    p * dw
                } else {
                    2.0 * p * dw
                }
            })
            .sum()
    }

    pub fn peak_frequency(&self) -> f64 {
        self.frequencies[argmax(&self.power)]
    }
}

pub fn periodogram(series: &[f64], detrend: bool, spans: &[usize]) -> Result<SpectrumEstimate, StatsError> {
    periodogram_with(series, &PeriodogramOptions { detrend, spans: spans.to_vec(), ..Default::default() })
}

pub fn periodogram_with(series: &[f64], opts: &PeriodogramOptions) -> Result<SpectrumEstimate, StatsError> {
    let t = series.len();
    if t < MIN_LENGTH {
        return Err(StatsError::SeriesTooShort { len: t, min: MIN_LENGTH });
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    if let Some(&bad) = opts.spans.iter().find(|&&m| m < 3 || m % 2 == 0) {
        return Err(StatsError::InvalidSpan(bad));
    }
    if !(0.0..=0.5).contains(&opts.taper) {
        return Err(StatsError::InvalidTaper(opts.taper));
    }

    let mut x = if opts.detrend { detrended(series) } else { demeaned(series) };
    let u2 = apply_taper(&mut x, opts.taper);

    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(t).process(&mut buf);
    let norm = 2.0 * PI * t as f64 * u2;
    let mut full: Vec<f64> = buf.iter().map(|c| c.norm_sqr() / norm).collect();
    full[0] = 0.5 * (full[1] + full[t - 1]);

    let half = t / 2;
    let raw_power = full[1..=half].to_vec();
    for &m in &opts.spans {
        full = daniell_circular(&full, m / 2);
    }
    let power = full[1..=half].to_vec();
    let frequencies: Vec<f64> = (1..=half).map(|k| k as f64 / t as f64).collect();

    let peak = argmax(&power);
    let threshold = power[peak] / 2.0;
    let mut lo = peak;
    while lo > 0 && power[lo - 1] > threshold {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < power.len() && power[hi + 1] > threshold {
        hi += 1;
    }
    let years = |f: f64| 1.0 / (f * opts.per_year);
    let smoothing = if opts.spans.is_empty() {
        "none".to_string()
    } else {
        let spans: Vec<String> = opts.spans.iter().map(|m| m.to_string()).collect();
        format!("modified Daniell, spans ({})", spans.join(","))
    };
    Ok(SpectrumEstimate {
        dominant_period_range: (years(frequencies[hi]), years(frequencies[lo])),
        frequencies,
        power,
        raw_power,
        smoothing,
        len: t,
    })
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (k, &p) in v.iter().enumerate() {
        if p > v[best] {
            best = k;
        }
    }
    best
}

fn demeaned(series: &[f64]) -> Vec<f64> {
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    series.iter().map(|x| x - mean).collect()
}

fn detrended(series: &[f64]) -> Vec<f64> {
    let t = series.len() as f64;
    let tbar = (t - 1.0) / 2.0;
    let mean = series.iter().sum::<f64>() / t;
    let (sxy, sxx) = series.iter().enumerate().fold((0.0, 0.0), |(sxy, sxx), (k, y)| {
        let dx = k as f64 - tbar;
        (sxy + dx * (y - mean), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    series.iter().enumerate().map(|(k, y)| y - mean - slope * (k as f64 - tbar)).collect()
}

/// Split cosine bell over `taper` of the series at each end. Returns the
/// variance correction `u2` the periodogram is divided by.
fn apply_taper(x: &mut [f64], taper: f64) -> f64 {
    let m = (x.len() as f64 * taper).floor() as usize;
    if m == 0 {
        return 1.0;
    }
    let n = x.len();
    for k in 0..m {
        let w = 0.5 * (1.0 - (PI * (2 * k + 1) as f64 / (2 * m) as f64).cos());
        x[k] *= w;
        x[n - 1 - k] *= w;
    }
    1.0 - (5.0 / 8.0) * taper * 2.0
}

/// Modified Daniell kernel of half-width `h`, applied circularly.
fn daniell_circular(p: &[f64], h: usize) -> Vec<f64> {
    let n = p.len() as isize;
    let h = h as isize;
    let inner = 1.0 / (2 * h) as f64;
    (0..n)
        .map(|k| {
            (-h..=h)
                .map(|j| {
                    let w = if j.abs() == h { inner / 2.0 } else { inner };
                    w * p[(k + j).rem_euclid(n) as usize]
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_tone_peak() {
        let x: Vec<f64> = (0..128).map(|t| (2.0 * PI * t as f64 / 16.0).sin()).collect();
        let s = periodogram(&x, false, &[]).unwrap();
        assert_eq!(s.peak_frequency(), 1.0 / 16.0);
        assert_eq!(s.frequencies.len(), 64);
        assert_eq!(*s.frequencies.last().unwrap(), 0.5);
        assert_eq!(s.smoothing, "none");
        // period 16 quarters is 4 years
        assert_eq!(s.dominant_period_range, (4.0, 4.0));
    }

    #[test]
    fn parseval_detrended() {
        let x: Vec<f64> = (0..37).map(|t| (t as f64 * 0.9).sin() + 0.05 * t as f64 + (t as f64).sqrt()).collect();
        let s = periodogram(&x, true, &[]).unwrap();
        let r = detrended(&x);
        let var = r.iter().map(|v| v * v).sum::<f64>() / r.len() as f64;
        assert!((s.total_raw_power() - var).abs() < 1e-10);
    }

    #[test]
    fn smoothing_preserves_mass_and_flattens() {
        let x: Vec<f64> = (0..64).map(|t| (2.0 * PI * t as f64 / 8.0).cos()).collect();
        let s = periodogram(&x, false, &[3, 5]).unwrap();
        assert!(s.power.iter().all(|&p| p >= 0.0));
        let peak_raw = s.raw_power.iter().cloned().fold(0.0, f64::max);
        let peak = s.power.iter().cloned().fold(0.0, f64::max);
        assert!(peak < peak_raw);
        assert_eq!(s.peak_frequency(), 1.0 / 8.0);
    }

    #[test]
    fn daniell_weights() {
        let mut spike = vec![0.0; 9];
        spike[4] = 1.0;
        let out = daniell_circular(&spike, 1);
        assert_eq!(&out[3..6], &[0.25, 0.5, 0.25]);
        let out = daniell_circular(&spike, 2);
        assert_eq!(&out[2..7], &[0.125, 0.25, 0.25, 0.25, 0.125]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(periodogram(&[1.0; 15], true, &[]), Err(StatsError::SeriesTooShort { .. })));
        let x: Vec<f64> = (0..20).map(f64::from).collect();
        assert_eq!(periodogram(&x, true, &[4]).unwrap_err(), StatsError::InvalidSpan(4));
        assert_eq!(periodogram(&x, true, &[1]).unwrap_err(), StatsError::InvalidSpan(1));
        let opts = PeriodogramOptions { taper: 0.7, ..Default::default() };
        assert_eq!(periodogram_with(&x, &opts).unwrap_err(), StatsError::InvalidTaper(0.7));
    }

    #[test]
    fn taper_weights() {
        let mut x = vec![1.0; 20];
        let u2 = apply_taper(&mut x, 0.1);
        assert!((u2 - 0.875).abs() < 1e-15);
        assert!(x[0] < 0.5 && x[19] < 0.5 && x[1] > 0.5 && x[10] == 1.0);
        assert_eq!(x[0], x[19]);
    }
}
