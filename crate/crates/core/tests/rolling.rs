use cyclesync::rolling::{rolling_analysis_with, StandardizationScope};
use cyclesync::{rolling_analysis, summarize_fractions, synthetic, Panel, Quarter, RollingError};

fn extend_by_one(panel: &Panel, extra: &[f64]) -> Panel {
    let rows = panel.rows().iter().zip(extra).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    Panel::new(panel.labels().to_vec(), panel.start(), rows).unwrap()
}

#[test]
fn appending_a_quarter_adds_exactly_one_window() {
    let panel = synthetic::independent_panel(5, 60, 3);
    let longer = extend_by_one(&panel, &[0.3, -1.2, 0.8, 2.0, -0.4]);
    let a = rolling_analysis::<&str>(&panel, 20, &[]).unwrap();
    let b = rolling_analysis::<&str>(&longer, 20, &[]).unwrap();
    assert_eq!(a.len(), 41);
    assert_eq!(b.len(), a.len() + 1);
    assert_eq!(&b[..a.len()], &a[..]);
    assert_eq!(b.last().unwrap().end, longer.end());
}

#[test]
fn permuting_rows_leaves_fractions_unchanged() {
    let panel = synthetic::ramp_panel(6, 80, 0.1, 0.7, 9);
    let order = ["C3", "C0", "C5", "C1", "C4", "C2"];
    let permuted = panel.select(&order).unwrap();
    let a = rolling_analysis::<&str>(&panel, 32, &[]).unwrap();
    let b = rolling_analysis::<&str>(&permuted, 32, &[]).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.start, y.start);
        assert!((x.fraction - y.fraction).abs() < 1e-12);
        assert!((x.ipr_top - y.ipr_top).abs() < 1e-10);
    }
}

#[test]
fn subset_matches_running_on_the_selected_panel() {
    let panel = synthetic::block_panel(&[3, 3], 0.6, 90, 4);
    for subset in [vec!["C0", "C1"], vec!["C0", "C1", "C4"], vec!["C5", "C2", "C0", "C1"]] {
        let via_subset = rolling_analysis(&panel, 24, &subset).unwrap();
        let via_select = rolling_analysis::<&str>(&panel.select(&subset).unwrap(), 24, &[]).unwrap();
        assert_eq!(via_subset, via_select);
    }
}

#[test]
fn window_equal_to_sample_gives_one_full_sample_window() {
    let panel = synthetic::independent_panel(4, 40, 8);
    let windows = rolling_analysis::<&str>(&panel, 40, &[]).unwrap();
    assert_eq!(windows.len(), 1);
    let eig = cyclesync::eigen(&cyclesync::correlation(&panel.standardize().unwrap()).unwrap()).unwrap();
    assert!((windows[0].fraction - cyclesync::rmt::market_fraction(&eig)).abs() < 1e-12);
}

#[test]
fn perfectly_correlated_rows_give_fraction_one() {
    let base = synthetic::independent_panel(2, 50, 2).rows()[0].clone();
    let rows = (1..=4).map(|k| base.iter().map(|x| k as f64 * x + k as f64).collect()).collect();
    let panel =
        Panel::new(vec!["A".into(), "B".into(), "C".into(), "D".into()], Quarter::new(1990, 1).unwrap(), rows).unwrap();
    for w in rolling_analysis::<&str>(&panel, 16, &[]).unwrap() {
        assert!((w.fraction - 1.0).abs() < 1e-10);
        assert!((w.participation_top - 4.0).abs() < 1e-8);
    }
}

#[test]
fn whole_sample_scope_stays_a_share_of_the_trace() {
    let panel = synthetic::ramp_panel(5, 70, 0.2, 0.8, 5);
    let windows = rolling_analysis_with::<&str>(&panel, 20, &[], StandardizationScope::WholeSample).unwrap();
    assert_eq!(windows.len(), 51);
    for w in &windows {
        assert!(w.fraction > 1.0 / 5.0 - 1e-12 && w.fraction <= 1.0 + 1e-12);
    }
}

#[test]
fn invalid_requests_are_rejected() {
    let panel = synthetic::independent_panel(4, 30, 1);
    assert!(matches!(rolling_analysis::<&str>(&panel, 31, &[]), Err(RollingError::WindowTooLong { .. })));
    assert!(rolling_analysis(&panel, 10, &["C0", "nope"]).is_err());
    assert!(summarize_fractions(&[]).is_err());
}
