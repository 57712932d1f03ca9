#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = cyclesync::ingest::read_csv(data);
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(series) = cyclesync::parse_csv(text) {
            let again = cyclesync::parse_csv(&cyclesync::ingest::write_csv(&series)).expect("written csv parses");
            assert_eq!(again, series);
        }
    }
});
