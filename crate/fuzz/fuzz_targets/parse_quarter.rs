#![no_main]

use cyclesync::Quarter;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(q) = text.parse::<Quarter>() {
            assert_eq!(q.to_string(), text);
            assert_eq!(Quarter::new(q.year(), q.quarter()), Some(q));
        }
    }
});
