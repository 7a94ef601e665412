#![no_main]

use acsl_core::io::{link_to_json, load_str, load_value};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = load_str(text) else {
        return;
    };
    // anything that loads as a link must survive a write/read cycle
    if let Some(link) = doc.link() {
        let back = load_value(&link_to_json(link, doc.k)).expect("written links reload");
        assert_eq!(back.link(), Some(link));
        assert_eq!(back.k, doc.k);
    }
});
