#![no_main]
use ftplane::geometry::Vec2;
use ftplane::norm::PolygonalNorm;
use ftplane::solver::ft_solve;
use ftplane::uniqueness::uniqueness_verdict;
use libfuzzer_sys::fuzz_target;

// Raw little-endian f64 pairs: the first `2k` are polygon vertices, the
// rest (up to 8) are terminals.
fuzz_target!(|data: &[u8]| {
    let nums: Vec<f64> = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let pairs: Vec<Vec2> = nums.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect();
    if pairs.len() < 4 {
        return;
    }
    let m = (pairs.len() / 2).min(64) & !1;
    let Ok(norm) = PolygonalNorm::new(&pairs[..m]) else {
        return;
    };
    let _ = uniqueness_verdict(&norm);
    let terminals: Vec<Vec2> = pairs[m..].iter().take(8).copied().collect();
    if !terminals.is_empty() && terminals.iter().all(|t| t.norm_inf() < 1e6) {
        let _ = ft_solve(&norm, &terminals);
    }
});
