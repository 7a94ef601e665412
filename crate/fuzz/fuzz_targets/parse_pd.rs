#![no_main]

use acsl_core::diagram::{parse_pd, Framing};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = parse_pd(text) else {
        return;
    };
    let m = d.mirror();
    assert_eq!(m.mirror(), d);
    // mirroring negates every linking number and writhe
    if let (Ok(a), Ok(b)) = (
        d.linking_matrix(&Framing::Blackboard),
        m.linking_matrix(&Framing::Blackboard),
    ) {
        for (ra, rb) in a.linking.iter().zip(&b.linking) {
            for (x, y) in ra.iter().zip(rb) {
                assert_eq!(*x, -*y);
            }
        }
    }
});
