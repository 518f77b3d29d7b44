#![no_main]
use ftplane::doc::{to_json, VerdictDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(doc) = VerdictDocument::parse(text) {
            assert!(VerdictDocument::parse(&to_json(&doc)).is_ok());
        }
    }
});
