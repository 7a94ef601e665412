#![no_main]

use acsl_core::diagram::parse_crossings;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_crossings(text);
    }
});
