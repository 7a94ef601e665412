#![no_main]

use acsl_core::io::{cyc_from_json, cyc_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    if let Ok(c) = cyc_from_json(&v) {
        assert_eq!(cyc_from_json(&cyc_to_json(&c)).as_ref(), Ok(&c));
    }
});
