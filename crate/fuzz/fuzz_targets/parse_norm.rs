#![no_main]
use ftplane::doc::NormDocument;
use ftplane::geometry::{Tol, Vec2};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = NormDocument::parse(text) else {
        return;
    };
    if let Ok(norm) = doc.to_norm(Tol::default()) {
        let g = norm.gauge(Vec2::new(0.3, -0.7));
        assert!(g.is_finite() && g > 0.0);
    }
});
