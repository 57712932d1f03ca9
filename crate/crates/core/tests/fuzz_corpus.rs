//! Replays the checked-in fuzz corpus through the same checks as the fuzz
//! targets, so regressions surface under plain `cargo test`.

use std::fs;
use std::path::PathBuf;

use cyclesync::ingest::{read_csv, write_csv};
use cyclesync::{build_panel, correlation, eigen, parse_csv, GrowthMethod, Quarter};

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> =
        fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())).map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.into_iter().map(|p| (p.clone(), fs::read(&p).unwrap())).collect()
}

#[test]
fn csv_seeds_parse_or_fail_cleanly() {
    let mut parsed = 0;
    for (path, bytes) in corpus("parse_csv") {
        let streamed = read_csv(bytes.as_slice());
        if let Ok(text) = std::str::from_utf8(&bytes) {
            let direct = parse_csv(text);
            assert_eq!(direct.is_ok(), streamed.is_ok(), "{}", path.display());
            if let Ok(series) = direct {
                assert_eq!(parse_csv(&write_csv(&series)).unwrap(), series, "{}", path.display());
                parsed += 1;
            }
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn quarter_seeds_round_trip_when_valid() {
    let mut valid = 0;
    for (_, bytes) in corpus("parse_quarter") {
        if let Ok(text) = std::str::from_utf8(&bytes) {
            if let Ok(q) = text.parse::<Quarter>() {
                assert_eq!(q.to_string(), text);
                valid += 1;
            }
        }
    }
    assert!(valid >= 3);
}

#[test]
fn pipeline_seeds_run_without_panicking() {
    for (_, bytes) in corpus("pipeline") {
        let Ok(levels) = parse_csv(std::str::from_utf8(&bytes).unwrap()) else { continue };
        let Ok(growth) = levels.iter().map(|s| GrowthMethod::YoyPercent.apply(s)).collect::<Result<Vec<_>, _>>() else {
            continue;
        };
        let Ok(panel) = build_panel::<&str>(&growth, &[], true) else { continue };
        if let Ok(corr) = correlation(&panel) {
            let _ = eigen(&corr);
        }
    }
}
