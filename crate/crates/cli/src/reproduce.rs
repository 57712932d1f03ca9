//! Side-by-side comparison of the published eight-economy figures with the
//! values recomputed from whatever data file is supplied.

use serde::Serialize;

use crate::commands::{comparison, dendrogram, growth_panel, run_rolling, spectrum_report, SummaryReport};
use crate::output::{emit, json, Table};
use crate::{CliError, Format, Metric, ReproduceArgs};

#[derive(Serialize)]
struct Row {
    quantity: String,
    published: String,
    recomputed: String,
}

#[derive(Serialize)]
struct Check {
    check: &'static str,
    passed: bool,
}

#[derive(Serialize)]
struct Report {
    rows: Vec<Row>,
    checks: Vec<Check>,
}

fn row(quantity: &str, published: &str, recomputed: String) -> Row {
    Row { quantity: quantity.to_string(), published: published.to_string(), recomputed }
}

fn summary(s: &SummaryReport) -> String {
    format!("{:.2} / {:.2} / {:.2}", s.min, s.mean, s.max)
}

fn dominates(a: &SummaryReport, b: &SummaryReport) -> bool {
    a.min > b.min && a.mean > b.mean && a.max > b.max
}

pub fn run(args: &ReproduceArgs) -> Result<(), CliError> {
    let data = &args.data;
    let panel = growth_panel(data, &data.countries)?;
    let all = panel.labels().to_vec();
    for label in [&args.us, &args.uk] {
        if !all.contains(label) {
            return Err(CliError::Input(format!("label {label:?} not found in the selected countries")));
        }
    }
    let ex_us: Vec<String> = all.iter().filter(|l| **l != args.us).cloned().collect();
    let core: Vec<String> = ex_us.iter().filter(|l| **l != args.uk).cloned().collect();

    let spec = spectrum_report(&panel)?;
    let eigenvalues: Vec<f64> = spec.modes.iter().map(|m| m.eigenvalue).collect();
    let principal = &spec.modes[0];
    let component = |label: &str| {
        let i = spec.labels.iter().position(|l| l == label).expect("label present");
        principal.components[i]
    };
    let others: Vec<f64> = spec
        .labels
        .iter()
        .zip(&principal.components)
        .filter(|(l, _)| **l != args.us && **l != args.uk)
        .map(|(_, &c)| c)
        .collect();
    let min_of = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max_of = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let windows = run_rolling(&panel, &all, &args.window)?;
    let full_vs_ex_us = comparison(data, &args.window, &all, &ex_us)?;
    let ex_us_vs_core = comparison(data, &args.window, &ex_us, &core)?;

    let tree = dendrogram(&panel, Metric::RowsEuclidean)?;
    let order = cyclesync::merge_order(&tree);
    let first = order[0].members.join(", ");
    let mut pair = vec![args.us.clone(), args.uk.clone()];
    pair.sort();
    let us_uk_cluster = order.iter().any(|s| {
        let mut m = s.members.clone();
        m.sort();
        m == pair
    });
    let mut fb = vec![args.france.clone(), args.belgium.clone()];
    fb.sort();
    let mut first_sorted = order[0].members.clone();
    first_sorted.sort();

    let mut sorted_components: Vec<(f64, &String)> = principal.components.iter().copied().zip(&spec.labels).collect();
    sorted_components.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut two_smallest: Vec<String> = sorted_components.iter().take(2).map(|(_, l)| (*l).clone()).collect();
    two_smallest.sort();

    let rows = vec![
        row("eigenvalue range", "0.19 - 4.33", format!("{:.2} - {:.2}", min_of(&eigenvalues), max_of(&eigenvalues))),
        row(
            "Marchenko-Pastur band",
            "0.53 - 1.61",
            format!("{:.4} - {:.4}", spec.band.lambda_minus, spec.band.lambda_plus),
        ),
        row(
            "principal mode participation ratio (reported as IPR)",
            "7.15",
            format!("{:.2}", principal.participation_ratio),
        ),
        row("principal mode IPR", "-", format!("{:.4}", principal.ipr)),
        row("market fraction (full sample)", "0.54", format!("{:.2}", spec.market_fraction)),
        row(&format!("principal component {}", args.us), "0.23", format!("{:.2}", component(&args.us))),
        row(&format!("principal component {}", args.uk), "0.27", format!("{:.2}", component(&args.uk))),
        row("principal components, others", "0.32 - 0.40", format!("{:.2} - {:.2}", min_of(&others), max_of(&others))),
        row("rolling windows", "77", windows.len().to_string()),
        row("fraction min / mean / max, all", "0.38 / 0.60 / 0.77", summary(&full_vs_ex_us.summary_a)),
        row(
            &format!("fraction min / mean / max, excluding {}", args.us),
            "0.43 / 0.65 / 0.81",
            summary(&full_vs_ex_us.summary_b),
        ),
        row(
            &format!("fraction min / mean / max, excluding {} and {}", args.us, args.uk),
            "0.44 / 0.70 / 0.85",
            summary(&ex_us_vs_core.summary_b),
        ),
        row(&format!("KS p-value, with vs without {}", args.us), "0.00", format!("{:.4}", full_vs_ex_us.ks.p_value)),
        row(&format!("KS p-value, with vs without {}", args.uk), "0.00", format!("{:.4}", ex_us_vs_core.ks.p_value)),
        row("first merge", &format!("{}, {}", args.france, args.belgium), first),
        row(
            &format!("{} and {} form a cluster", args.us, args.uk),
            "yes",
            if us_uk_cluster { "yes" } else { "no" }.to_string(),
        ),
    ];
    let checks = vec![
        Check { check: "US and UK carry the two smallest principal components", passed: two_smallest == pair },
        Check {
            check: "summary excluding UK dominates summary including UK",
            passed: dominates(&ex_us_vs_core.summary_b, &ex_us_vs_core.summary_a),
        },
        Check {
            check: "summary excluding US dominates summary including US",
            passed: dominates(&full_vs_ex_us.summary_b, &full_vs_ex_us.summary_a),
        },
        Check {
            check: "both KS tests reject at 5%",
            passed: full_vs_ex_us.ks.p_value < 0.05 && ex_us_vs_core.ks.p_value < 0.05,
        },
        Check { check: "first merge is France and Belgium", passed: first_sorted == fb },
    ];

    let report = Report { rows, checks };
    let text = match data.out.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut table = Table::new(&["quantity", "published", "recomputed"]);
            for r in &report.rows {
                table.push(vec![r.quantity.clone(), r.published.clone(), r.recomputed.clone()]);
            }
            for c in &report.checks {
                table.push(vec![
                    format!("check: {}", c.check),
                    "holds".into(),
                    if c.passed { "pass" } else { "fail" }.into(),
                ]);
            }
            table.render()
        }
    };
    emit(data.out.output.as_deref(), &text)
}
