#![no_main]

use libfuzzer_sys::fuzz_target;
use strandcat::sets::parse_subset_pair;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_subset_pair(s);
    }
});
