#![no_main]
use ftplane::doc::{to_json, SolutionDocument};
use ftplane::geometry::Tol;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = SolutionDocument::parse(text) {
        let _ = doc.region(&Tol::default());
        let _ = doc.functionals();
        assert!(SolutionDocument::parse(&to_json(&doc)).is_ok());
    }
});
