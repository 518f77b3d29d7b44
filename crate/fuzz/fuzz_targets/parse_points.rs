#![no_main]
use ftplane::doc::{parse_points, to_json, PointsDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(points) = parse_points(text) {
            assert!(points.iter().all(|p| p.is_finite()));
            let again = parse_points(&to_json(&PointsDocument::from_points(&points)));
            assert_eq!(again.map(|p| p.len()), Ok(points.len()));
        }
    }
});
