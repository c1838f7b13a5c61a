#![no_main]

use libfuzzer_sys::fuzz_target;
use strandcat::LabelSet;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(set) = s.parse::<LabelSet>() {
            assert_eq!(set.to_string().parse::<LabelSet>(), Ok(set));
        }
    }
});
