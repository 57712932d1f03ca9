use std::fs;
use std::path::Path;

use cyclesync::cluster::{self, Dendrogram};
use cyclesync::ingest::{self, Panel, QuarterlySeries};
use cyclesync::rmt::{self, ModeClass};
use cyclesync::rolling::{self, FractionSummary, WindowResult};
use cyclesync::stats::{self, KsResult, MP_CDF_THRESHOLD, MP_OUTSIDE_THRESHOLD};
use cyclesync::{synthetic, GrowthMethod, Quarter};
use serde::Serialize;

use crate::output::{emit, json, num, Table};
use crate::{
    CliError, ClusterArgs, CompareArgs, DataArgs, Format, Metric, MpcheckArgs, RollingArgs, SynthArgs, WindowArgs,
};

pub fn read_levels(path: &Path) -> Result<Vec<QuarterlySeries>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    ingest::parse_csv(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Growth-rate series for `labels` (every column when empty).
pub fn growth_series(args: &DataArgs, labels: &[String]) -> Result<Vec<QuarterlySeries>, CliError> {
    let levels = read_levels(&args.input)?;
    let method: GrowthMethod = args.growth.into();
    let wanted = |s: &&QuarterlySeries| labels.is_empty() || labels.iter().any(|l| l == s.label());
    for label in labels {
        if !levels.iter().any(|s| s.label() == label) {
            return Err(ingest::IngestError::UnknownLabel { label: label.clone() }.into());
        }
    }
    levels
        .iter()
        .filter(wanted)
        .map(|s| method.apply(s).map_err(|e| CliError::Input(format!("{}: {e}", args.input.display()))))
        .collect()
}

/// Unstandardized growth panel over the common sample of `labels`.
pub fn growth_panel(args: &DataArgs, labels: &[String]) -> Result<Panel, CliError> {
    let series = growth_series(args, labels)?;
    Ok(ingest::build_panel(&series, labels, false)?)
}

fn labels_or_all(panel: &Panel, labels: &[String]) -> Vec<String> {
    if labels.is_empty() {
        panel.labels().to_vec()
    } else {
        labels.to_vec()
    }
}

#[derive(Serialize)]
pub struct ModeReport {
    pub mode: usize,
    pub eigenvalue: f64,
    pub class: ModeClass,
    pub ipr: f64,
    pub participation_ratio: f64,
    /// Eigenvector components, aligned with `labels`.
    pub components: Vec<f64>,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub labels: Vec<String>,
    pub start: Quarter,
    pub end: Quarter,
    pub n: usize,
    pub t: usize,
    pub band: rmt::MpBand,
    pub market_fraction: f64,
    pub market_percent: f64,
    pub above: usize,
    pub below: usize,
    pub noise: usize,
    pub modes: Vec<ModeReport>,
}

pub fn spectrum_report(panel: &Panel) -> Result<SpectrumReport, CliError> {
    let z = panel.standardize()?;
    let corr = rmt::correlation(&z)?;
    let eig = rmt::eigen(&corr)?;
    let band = rmt::mp_band(z.n(), z.t(), 1.0)?;
    let classes = rmt::classify_modes(&eig, &band);
    let modes = (0..eig.n())
        .map(|alpha| {
            let v = eig.eigenvector(alpha);
            let ipr = rmt::ipr(v)?;
            Ok(ModeReport {
                mode: alpha,
                eigenvalue: eig.eigenvalue(alpha),
                class: ModeClass::of(eig.eigenvalue(alpha), &band),
                ipr,
                participation_ratio: 1.0 / ipr,
                components: v.to_vec(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let fraction = rmt::market_fraction(&eig);
    Ok(SpectrumReport {
        labels: z.labels().to_vec(),
        start: z.start(),
        end: z.end(),
        n: z.n(),
        t: z.t(),
        band,
        market_fraction: fraction,
        market_percent: 100.0 * fraction,
        above: classes.above.len(),
        below: classes.below.len(),
        noise: classes.noise.len(),
        modes,
    })
}

pub fn spectrum(args: &DataArgs) -> Result<(), CliError> {
    let panel = growth_panel(args, &args.countries)?;
    let report = spectrum_report(&panel)?;
    let text = match args.out.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut header: Vec<String> = [
                "mode",
                "eigenvalue",
                "class",
                "ipr",
                "participation_ratio",
                "lambda_minus",
                "lambda_plus",
                "market_fraction",
                "market_percent",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            header.extend(report.labels.iter().cloned());
            let mut table = Table::new(&header);
            for m in &report.modes {
                let mut row = vec![
                    m.mode.to_string(),
                    num(m.eigenvalue),
                    m.class.as_str().to_string(),
                    num(m.ipr),
                    num(m.participation_ratio),
                    num(report.band.lambda_minus),
                    num(report.band.lambda_plus),
                    num(report.market_fraction),
                    num(report.market_percent),
                ];
                row.extend(m.components.iter().map(|&c| num(c)));
                table.push(row);
            }
            table.render()
        }
    };
    emit(args.out.output.as_deref(), &text)
}

#[derive(Serialize)]
pub struct SummaryReport {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub min_percent: f64,
    pub mean_percent: f64,
    pub max_percent: f64,
}

impl From<FractionSummary> for SummaryReport {
    fn from(s: FractionSummary) -> Self {
        SummaryReport {
            min: s.min,
            mean: s.mean,
            max: s.max,
            min_percent: 100.0 * s.min,
            mean_percent: 100.0 * s.mean,
            max_percent: 100.0 * s.max,
        }
    }
}

pub fn run_rolling(panel: &Panel, labels: &[String], window: &WindowArgs) -> Result<Vec<WindowResult>, CliError> {
    Ok(rolling::rolling_analysis_with(panel, window.window, labels, window.standardize.into())?)
}

fn summary_line(label: &str, s: &FractionSummary) -> String {
    format!("# {label}summary fraction min={} mean={} max={}", s.min, s.mean, s.max)
}

pub fn rolling(args: &RollingArgs) -> Result<(), CliError> {
    let data = &args.data;
    let panel = growth_panel(data, &data.countries)?;
    let results = run_rolling(&panel, &data.countries, &args.window)?;
    let summary = rolling::summarize_fractions(&results)?;
    let text = match data.out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                labels: Vec<String>,
                window: usize,
                standardize: cyclesync::StandardizationScope,
                count: usize,
                summary: SummaryReport,
                windows: Vec<WindowRow<'a>>,
            }
            #[derive(Serialize)]
            struct WindowRow<'a> {
                #[serde(flatten)]
                result: &'a WindowResult,
                percent: f64,
            }
            json(&Report {
                labels: labels_or_all(&panel, &data.countries),
                window: args.window.window,
                standardize: args.window.standardize.into(),
                count: results.len(),
                summary: summary.into(),
                windows: results.iter().map(|r| WindowRow { result: r, percent: 100.0 * r.fraction }).collect(),
            })
        }
        Format::Csv => {
            eprintln!("{}", summary_line("", &summary));
            let mut table = Table::new(&[
                "start",
                "end",
                "n",
                "t",
                "lambda_max",
                "fraction",
                "percent",
                "ipr_top",
                "participation_top",
            ]);
            for r in &results {
                table.push(vec![
                    r.start.to_string(),
                    r.end.to_string(),
                    r.n.to_string(),
                    r.t.to_string(),
                    num(r.lambda_max),
                    num(r.fraction),
                    num(100.0 * r.fraction),
                    num(r.ipr_top),
                    num(r.participation_top),
                ]);
            }
            table.render()
        }
    };
    emit(data.out.output.as_deref(), &text)
}

pub fn dendrogram(panel: &Panel, metric: Metric) -> Result<Dendrogram, CliError> {
    let corr = rmt::correlation(&panel.standardize()?)?;
    let distances = match metric {
        Metric::RowsEuclidean => cluster::dissimilarity_rows(&corr),
        Metric::CorrelationDistance => cluster::correlation_distance(&corr),
    };
    Ok(cluster::agglomerate(&distances, corr.labels())?)
}

pub fn cluster(args: &ClusterArgs) -> Result<(), CliError> {
    let data = &args.data;
    let panel = growth_panel(data, &data.countries)?;
    let tree = dendrogram(&panel, args.metric)?;
    let newick = tree.to_newick();
    let n = tree.leaves().len();
    let steps: Vec<(usize, &cluster::Merge, Vec<String>)> = tree
        .merges()
        .iter()
        .enumerate()
        .map(|(k, m)| (k, m, tree.members(n + k).into_iter().map(|i| tree.leaves()[i].clone()).collect()))
        .collect();
    let text = match data.out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Step<'a> {
                step: usize,
                node: usize,
                left: usize,
                right: usize,
                height: f64,
                size: usize,
                members: &'a [String],
            }
            #[derive(Serialize)]
            struct Report<'a> {
                leaves: &'a [String],
                metric: &'static str,
                linkage: &'static str,
                merges: Vec<Step<'a>>,
                newick: &'a str,
            }
            json(&Report {
                leaves: tree.leaves(),
                metric: metric_name(args.metric),
                linkage: "average",
                merges: steps
                    .iter()
                    .map(|(k, m, members)| Step {
                        step: *k,
                        node: n + k,
                        left: m.left,
                        right: m.right,
                        height: m.height,
                        size: m.size,
                        members,
                    })
                    .collect(),
                newick: &newick,
            })
        }
        Format::Csv => {
            let mut table = Table::new(&["step", "node", "left", "right", "height", "size", "members"]);
            for (k, m, members) in &steps {
                table.push(vec![
                    k.to_string(),
                    (n + k).to_string(),
                    m.left.to_string(),
                    m.right.to_string(),
                    num(m.height),
                    m.size.to_string(),
                    members.join(";"),
                ]);
            }
            table.render()
        }
    };
    if let Some(path) = &args.newick {
        emit(Some(path), &format!("{newick}\n"))?;
    }
    emit(data.out.output.as_deref(), &text)
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::RowsEuclidean => "rows-euclidean",
        Metric::CorrelationDistance => "correlation-distance",
    }
}

#[derive(Serialize)]
pub struct Comparison {
    pub subset_a: Vec<String>,
    pub subset_b: Vec<String>,
    pub summary_a: SummaryReport,
    pub summary_b: SummaryReport,
    pub ks: KsResult,
    pub fractions_a: Vec<f64>,
    pub fractions_b: Vec<f64>,
    pub note: &'static str,
}

const OVERLAP_NOTE: &str =
    "overlapping windows are serially dependent; the KS p-value treats them as independent draws";

/// Rolling fractions of both subsets over the common sample of their union,
/// compared with a two-sample KS test.
pub fn comparison(
    args: &DataArgs,
    window: &WindowArgs,
    subset_a: &[String],
    subset_b: &[String],
) -> Result<Comparison, CliError> {
    let levels = read_levels(&args.input)?;
    let all: Vec<String> = levels.iter().map(|s| s.label().to_string()).collect();
    let subset_a = if subset_a.is_empty() { all.clone() } else { subset_a.to_vec() };
    let subset_b = if subset_b.is_empty() { all } else { subset_b.to_vec() };
    let mut union = subset_a.clone();
    for l in &subset_b {
        if !union.contains(l) {
            union.push(l.clone());
        }
    }
    let panel = growth_panel(args, &union)?;
    let a = run_rolling(&panel, &subset_a, window)?;
    let b = run_rolling(&panel, &subset_b, window)?;
    let fractions_a: Vec<f64> = a.iter().map(|r| r.fraction).collect();
    let fractions_b: Vec<f64> = b.iter().map(|r| r.fraction).collect();
    let ks = stats::ks_two_sample(&fractions_a, &fractions_b)?;
    Ok(Comparison {
        subset_a,
        subset_b,
        summary_a: rolling::summarize_fractions(&a)?.into(),
        summary_b: rolling::summarize_fractions(&b)?.into(),
        ks,
        fractions_a,
        fractions_b,
        note: OVERLAP_NOTE,
    })
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let data = &args.data;
    let report = comparison(data, &args.window, &data.countries, &args.against)?;
    let text = match data.out.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut table = Table::new(&["statistic", "value"]);
            let rows = [
                ("d_statistic", num(report.ks.d_statistic)),
                ("p_value", num(report.ks.p_value)),
                ("n1", report.ks.n1.to_string()),
                ("n2", report.ks.n2.to_string()),
                ("min_a", num(report.summary_a.min)),
                ("mean_a", num(report.summary_a.mean)),
                ("max_a", num(report.summary_a.max)),
                ("min_b", num(report.summary_b.min)),
                ("mean_b", num(report.summary_b.mean)),
                ("max_b", num(report.summary_b.max)),
            ];
            for (k, v) in rows {
                table.push(vec![k.to_string(), v]);
            }
            eprintln!("# note: {OVERLAP_NOTE}");
            table.render()
        }
    };
    emit(data.out.output.as_deref(), &text)
}

pub fn mpcheck(args: &MpcheckArgs) -> Result<(), CliError> {
    let report = stats::mp_monte_carlo(args.n, args.t, args.trials, args.seed)?;
    let text = match args.out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                #[serde(flatten)]
                result: &'a stats::MpMonteCarlo,
                outside_threshold: f64,
                cdf_threshold: f64,
            }
            json(&Report { result: &report, outside_threshold: MP_OUTSIDE_THRESHOLD, cdf_threshold: MP_CDF_THRESHOLD })
        }
        Format::Csv => {
            eprintln!(
                "# outside_fraction={} (< {}) cdf_discrepancy={} (< {}) {}",
                report.outside_fraction,
                MP_OUTSIDE_THRESHOLD,
                report.cdf_discrepancy,
                MP_CDF_THRESHOLD,
                if report.passed { "PASS" } else { "FAIL" }
            );
            let mut table = Table::new(&["lower", "upper", "count", "empirical_density", "mp_density"]);
            for b in &report.histogram {
                table.push(vec![
                    num(b.lower),
                    num(b.upper),
                    b.count.to_string(),
                    num(b.empirical_density),
                    num(b.mp_density),
                ]);
            }
            table.render()
        }
    };
    emit(args.out.output.as_deref(), &text)
}

pub fn growth(args: &DataArgs) -> Result<(), CliError> {
    let panel = growth_panel(args, &args.countries)?;
    let series = panel
        .labels()
        .iter()
        .zip(panel.rows())
        .map(|(l, r)| QuarterlySeries::new(l.clone(), panel.start(), r.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.out.format {
        Format::Csv => ingest::write_csv(&series),
        Format::Json => json(&panel),
    };
    emit(args.out.output.as_deref(), &text)
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    emit(args.output.as_deref(), &ingest::write_csv(&synthetic::eu8_levels(args.seed)))
}
