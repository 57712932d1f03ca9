#![no_main]

use cyclesync::cluster::dissimilarity_rows;
use cyclesync::{agglomerate, build_panel, correlation, eigen, parse_csv, rolling_analysis, GrowthMethod};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(levels) = parse_csv(text) else { return };
    let Ok(growth) = levels.iter().map(|s| GrowthMethod::YoyPercent.apply(s)).collect::<Result<Vec<_>, _>>() else {
        return;
    };
    let Ok(panel) = build_panel::<&str>(&growth, &[], true) else { return };
    let Ok(corr) = correlation(&panel) else { return };
    let _ = eigen(&corr);
    let _ = agglomerate(&dissimilarity_rows(&corr), panel.labels());
    let window = panel.t().min(8);
    let _ = rolling_analysis::<&str>(&build_panel::<&str>(&growth, &[], false).unwrap(), window, &[]);
});
