//! Seeded synthetic panels, so the whole pipeline can be exercised without
//! external data.

use crate::ingest::{Panel, QuarterlySeries};
use crate::quarter::Quarter;
use crate::random::NormalSource;

/// Labels of the bundled eight-economy dataset.
pub const EU8_LABELS: [&str; 8] = ["FR", "DE", "IT", "BE", "NL", "ES", "UK", "US"];

fn default_start() -> Quarter {
    Quarter::new(1981, 1).expect("valid quarter")
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("C{i}")).collect()
}

/// `n` independent standard normal rows of length `t`.
pub fn independent_panel(n: usize, t: usize, seed: u64) -> Panel {
    let mut src = NormalSource::new(seed);
    let rows = (0..n).map(|_| src.normals(t)).collect();
    Panel::new(labels(n), default_start(), rows).expect("valid synthetic panel")
}

/// One-factor panel whose pairwise correlation moves linearly from
/// `rho_start` at the first observation to `rho_end` at the last.
pub fn ramp_panel(n: usize, t: usize, rho_start: f64, rho_end: f64, seed: u64) -> Panel {
    let mut src = NormalSource::new(seed);
    let common = src.normals(t);
    let rows = (0..n)
        .map(|_| {
            (0..t)
                .map(|k| {
                    let rho = rho_start + (rho_end - rho_start) * k as f64 / (t - 1).max(1) as f64;
                    rho.sqrt() * common[k] + (1.0 - rho).sqrt() * src.standard_normal()
                })
                .collect()
        })
        .collect();
    Panel::new(labels(n), default_start(), rows).expect("valid synthetic panel")
}

/// Independent blocks of the given sizes; rows within a block share a factor
/// so their population correlation is `within`, rows in different blocks are
/// uncorrelated.
pub fn block_panel(block_sizes: &[usize], within: f64, t: usize, seed: u64) -> Panel {
    let mut src = NormalSource::new(seed);
    let mut rows = Vec::new();
    for &size in block_sizes {
        let factor = src.normals(t);
        for _ in 0..size {
            rows.push(
                factor.iter().map(|f| within.sqrt() * f + (1.0 - within).sqrt() * src.standard_normal()).collect(),
            );
        }
    }
    Panel::new(labels(rows.len()), default_start(), rows).expect("valid synthetic panel")
}

/// Levels whose year-over-year percent growth reproduces `growth`. The four
/// quarters before `growth_start` are set to `base`.
pub fn levels_from_growth(label: &str, growth_start: Quarter, growth: &[f64], base: f64) -> QuarterlySeries {
    let mut levels = vec![base; 4];
    for (k, g) in growth.iter().enumerate() {
        let year_ago = levels[k];
        levels.push(year_ago * (1.0 + g / 100.0));
    }
    QuarterlySeries::new(label, growth_start.offset(-4), levels).expect("finite levels")
}

fn ar1(src: &mut NormalSource, len: usize, phi: f64) -> Vec<f64> {
    let scale = (1.0 - phi * phi).sqrt();
    let mut x = src.standard_normal();
    (0..len)
        .map(|_| {
            x = phi * x + scale * src.standard_normal();
            x
        })
        .collect()
}

/// Real-GDP-like levels for eight economies, 1980Q1 to 2008Q1.
///
/// Growth is a mix of persistent factors: a world cycle, a continental cycle
/// shared by the six euro economies (whose weight rises over the sample), an
/// Atlantic cycle shared by UK and US, a France–Belgium component, and
/// idiosyncratic noise.
pub fn eu8_levels(seed: u64) -> Vec<QuarterlySeries> {
    let growth_start = default_start();
    let t = 109;
    let mut src = NormalSource::new(seed);
    let world = ar1(&mut src, t, 0.9);
    let continental = ar1(&mut src, t, 0.9);
    let atlantic = ar1(&mut src, t, 0.9);
    let franco_belgian = ar1(&mut src, t, 0.8);

    EU8_LABELS
        .iter()
        .enumerate()
        .map(|(i, &label)| {
            let own = ar1(&mut src, t, 0.6);
            let growth: Vec<f64> = (0..t)
                .map(|k| {
                    let ramp = k as f64 / (t - 1) as f64;
                    let cycle = match label {
                        "UK" | "US" => 0.45 * world[k] + 0.6 * atlantic[k] + 0.6 * own[k],
                        _ => {
                            let euro = 0.55 + 0.3 * ramp;
                            let pair = if matches!(label, "FR" | "BE") { 0.5 * franco_belgian[k] } else { 0.0 };
                            0.45 * world[k] + euro * continental[k] + pair + (0.55 - 0.25 * ramp) * own[k]
                        }
                    };
                    2.4 + 0.1 * i as f64 + 1.4 * cycle
                })
                .collect();
            levels_from_growth(label, growth_start, &growth, 100.0 + 10.0 * i as f64)
        })
        .collect()
}
