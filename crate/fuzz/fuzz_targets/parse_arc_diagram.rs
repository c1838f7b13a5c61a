#![no_main]

use libfuzzer_sys::fuzz_target;
use strandcat::ArcDiagram;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = ArcDiagram::parse(text) else {
        return;
    };
    // printing and reparsing is lossless
    assert_eq!(ArcDiagram::parse(&d.to_string()).as_ref(), Ok(&d));
    let verdict = d.validate();
    match d.to_quad_surface() {
        Ok(q) => {
            assert!(verdict.is_ok());
            assert_eq!(q.euler_char, d.l() as i64 - d.k() as i64);
            assert_eq!(q.squares.len(), d.k());
            assert_eq!(d.interior_count(), 2 * d.k() - d.l());
        }
        Err(_) => assert!(!verdict.is_ok()),
    }
});
