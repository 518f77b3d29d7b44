//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use ftplane::geometry::{hausdorff, Point2, RegionKind, Tol, Vec2};
use ftplane::lambda::{
    classify_lambda, lambda_triangle_solution, make_lambda_norm, torricelli_point, viewing_angle,
};
use ftplane::norm::{diamond, Functional, FunctionalSet, PolygonalNorm};
use ftplane::oracle::{
    grid_minimize, probe_solution_set, random_instance, random_symmetric_polygon, GridSpec,
};
use ftplane::solver::{
    alternative_selections, ft_solve, ft_solve_with, region_for_selection, FtSolution, SolveOptions,
};
use ftplane::uniqueness::{check_condition, solve_witness, uniqueness_verdict, Condition, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INSTANCES: usize = 200;

fn p(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Gauge from the supporting lines of the edges.
fn gauge_oracle(norm: &PolygonalNorm, v: Vec2) -> f64 {
    let vs = norm.vertices();
    (0..vs.len())
        .map(|k| {
            let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
            let n = (b - a).perp() * -1.0;
            n.dot(v) / n.dot(a)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Dual norm as a maximum over the unit polygon's vertices.
fn dual_oracle(norm: &PolygonalNorm, f: Functional) -> f64 {
    norm.vertices()
        .iter()
        .map(|&v| f.a * v.x + f.b * v.y)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn instances() -> Vec<(PolygonalNorm, Vec<Point2>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..INSTANCES).map(|_| random_instance(&mut rng)).collect()
}

type Outcome = Result<String, String>;

fn criterion1() -> Outcome {
    let mut matched = 0;
    let mut bad = Vec::new();
    for lambda in 2..=30u32 {
        match classify_lambda(lambda) {
            Ok(v) if v.is_unique() == (lambda % 3 != 0) => matched += 1,
            Ok(_) => bad.push(format!("{lambda}: wrong verdict")),
            Err(e) => bad.push(format!("{lambda}: {e}")),
        }
    }
    if bad.is_empty() {
        Ok(format!("{matched}/29 lambda-planes follow the mod-3 law"))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion2() -> Outcome {
    let tri = [p(0., 0.), p(1., 0.), p(0.5, 3f64.sqrt() / 2.)];
    let norm = make_lambda_norm(3).map_err(|e| e.to_string())?.norm;
    let sol = ft_solve(&norm, &tri).map_err(|e| e.to_string())?;
    let h = hausdorff(sol.region.vertices(), &tri);
    if sol.kind() == RegionKind::Polygon && h <= 1e-9 {
        Ok(format!(
            "polygon, Hausdorff distance to the triangle {h:.1e}"
        ))
    } else {
        Err(format!("{} at Hausdorff distance {h:e}", sol.kind()))
    }
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let norms: Vec<PolygonalNorm> = (0..10)
        .map(|_| {
            let half = rng.gen_range(2..=10);
            random_symmetric_polygon(&mut rng, half)
        })
        .collect();
    let mut worst = 0.0f64;
    let mut solved = 0;
    for _ in 0..50 {
        let n = [3, 5, 7, 9][rng.gen_range(0..4)];
        let base = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let a = rng.gen_range(0.0..PI);
        let dir = p(a.cos(), a.sin());
        let mut ts: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let pts: Vec<Point2> = ts.iter().map(|&t| base + dir * t).collect();
        ts.sort_by(f64::total_cmp);
        let middle = base + dir * ts[n / 2];
        for norm in &norms {
            for skip in [false, true] {
                let opts = SolveOptions {
                    skip_collinear_shortcut: skip,
                    ..SolveOptions::default()
                };
                let sol = ft_solve_with(norm, &pts, &opts).map_err(|e| format!("n={n}: {e}"))?;
                if sol.kind() != RegionKind::Point {
                    return Err(format!("n={n}: got a {}", sol.kind()));
                }
                worst = worst.max(sol.region.vertices()[0].dist(middle));
                solved += 1;
            }
        }
    }
    if worst <= 1e-9 {
        Ok(format!(
            "{solved} solves, worst distance to the middle point {worst:.1e}"
        ))
    } else {
        Err(format!("worst distance to the middle point {worst:e}"))
    }
}

fn check_certificate(norm: &PolygonalNorm, pts: &[Point2], sol: &FtSolution) -> Result<(), String> {
    let cert = &sol.certificate;
    let sum = cert.sum().vec().norm();
    if sum > 1e-8 {
        return Err(format!("functionals sum to {sum:e}"));
    }
    for (&x, &f) in pts.iter().zip(&cert.functionals) {
        let v = x - cert.p;
        let dn = dual_oracle(norm, f);
        if v.norm_inf() <= norm.tol().eps() {
            if dn > 1.0 + 1e-8 {
                return Err(format!("terminal share has dual norm {dn}"));
            }
            continue;
        }
        let g = gauge_oracle(norm, v);
        if (f.apply(v) - g).abs() > 1e-8 * (1.0 + g) || (dn - 1.0).abs() > 1e-8 {
            return Err(format!(
                "functional {f} does not norm {v}: {} vs {g}, dual {dn}",
                f.apply(v)
            ));
        }
    }
    Ok(())
}

fn criterion4(cases: &[(PolygonalNorm, Vec<Point2>, FtSolution)]) -> Outcome {
    for (i, (norm, pts, sol)) in cases.iter().enumerate() {
        check_certificate(norm, pts, sol).map_err(|e| format!("instance {i}: {e}"))?;
    }
    Ok(format!(
        "{} certificates sum to zero and norm their vectors",
        cases.len()
    ))
}

fn criterion5(cases: &[(PolygonalNorm, Vec<Point2>, FtSolution)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst_gap = 0.0f64;
    let mut worst_inside = 0.0f64;
    let mut min_excess = f64::INFINITY;
    for (i, (norm, pts, sol)) in cases.iter().enumerate() {
        let g = grid_minimize(norm, pts, &GridSpec::default());
        let bound = pts.len() as f64 * g.cell_diameter;
        let gap = (sol.objective - g.value).abs();
        if gap > bound {
            return Err(format!(
                "instance {i}: objective {} vs grid {} (bound {bound:e})",
                sol.objective, g.value
            ));
        }
        worst_gap = worst_gap.max(gap / bound);
        let size = pts.iter().map(|q| q.norm_inf()).fold(1.0, f64::max);
        let r = probe_solution_set(
            norm,
            pts,
            &sol.region,
            sol.objective,
            32,
            1e-6 * size,
            &mut rng,
        );
        if !r.is_clean(1e-8) {
            return Err(format!("instance {i}: probe {r:?}"));
        }
        worst_inside = worst_inside.max(r.max_inside_deviation);
        min_excess = min_excess.min(r.min_outside_excess);
    }
    Ok(format!(
        "grid gap at most {worst_gap:.3} of its bound, inside deviation {worst_inside:.1e}, outside excess at least {min_excess:.1e}"
    ))
}

fn has_segment_set(norm: &PolygonalNorm, pts: &[Point2], at: Point2) -> bool {
    pts.iter().any(|&x| {
        let v = x - at;
        v.norm_inf() > norm.tol().eps()
            && matches!(norm.norming_set(v), Ok(FunctionalSet::SegmentSet { .. }))
    })
}

fn criterion6(cases: &[(PolygonalNorm, Vec<Point2>, FtSolution)]) -> Outcome {
    let mut mixed: Vec<(PolygonalNorm, Vec<Point2>, FtSolution)> = cases.to_vec();
    // Instances built to put terminals in vertex directions of the optimum.
    let d = diamond();
    for pts in [
        vec![p(0., 0.), p(2., 0.), p(0., 2.)],
        vec![p(-2., 0.), p(2., 0.), p(0., 2.)],
        vec![p(-1., -1.), p(1., 1.), p(-1., 1.), p(1., -1.)],
    ] {
        let sol = ft_solve(&d, &pts).map_err(|e| e.to_string())?;
        mixed.push((d.clone(), pts, sol));
    }
    let hex = make_lambda_norm(3).map_err(|e| e.to_string())?.norm;
    for pts in [
        vec![
            p(1., 0.),
            p(-0.5, 0.8660254037844386),
            p(-0.5, -0.8660254037844386),
        ],
        vec![p(0., 0.), p(3., 0.), p(0., 3.), p(3., 3.)],
    ] {
        let sol = ft_solve(&hex, &pts).map_err(|e| e.to_string())?;
        mixed.push((hex.clone(), pts, sol));
    }

    // Any point of the optimal set away from the terminals may serve as the
    // base point; try the certificate point and every region vertex.
    // Lattice terminals make vertex directions, and so choices, common.
    let square = PolygonalNorm::new(&[p(1., 1.), p(-1., 1.), p(-1., -1.), p(1., -1.)])
        .map_err(|e| e.to_string())?;
    let s3 = 3f64.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for k in 0..150 {
        let (norm, cell) = match k % 3 {
            0 => (&d, [p(1., 0.), p(0., 1.)]),
            1 => (&square, [p(1., 0.), p(0., 1.)]),
            _ => (&hex, [p(1., 0.), p(0.5, s3 / 2.)]),
        };
        let n = rng.gen_range(3..=6);
        let mut pts: Vec<Point2> = Vec::new();
        while pts.len() < n {
            let q = cell[0] * rng.gen_range(-3..=3) as f64 + cell[1] * rng.gen_range(-3..=3) as f64;
            if !pts.iter().any(|&o| o.dist(q) < 1e-9) {
                pts.push(q);
            }
        }
        let sol = ft_solve(norm, &pts).map_err(|e| format!("lattice {k}: {e}"))?;
        mixed.push((norm.clone(), pts, sol));
    }

    let mut tested = 0;
    let mut selections_seen = 0;
    let mut worst = 0.0f64;
    for (i, (norm, pts, sol)) in mixed.iter().enumerate() {
        let mut bases = vec![sol.certificate.p];
        bases.extend_from_slice(sol.region.vertices());
        let tol = norm.tol();
        bases.retain(|&b| !pts.iter().any(|&x| tol.same_point(x, b)));
        let mut counted = false;
        for at in bases {
            if !has_segment_set(norm, pts, at) {
                continue;
            }
            let selections = alternative_selections(norm, pts, at);
            if selections.len() < 2 {
                continue;
            }
            if !counted {
                tested += 1;
                counted = true;
            }
            selections_seen += selections.len();
            for sel in &selections {
                let (region, _) = region_for_selection(norm, pts, sel)
                    .map_err(|e| format!("instance {i}: {e}"))?;
                let h = hausdorff(region.vertices(), sol.region.vertices());
                if region.kind() != sol.kind() || h > 1e-9 {
                    return Err(format!("instance {i}: selections give regions {h:e} apart"));
                }
                worst = worst.max(h);
            }
        }
    }
    if tested == 0 {
        return Err("no instance admitted two selections".into());
    }
    Ok(format!(
        "{tested} instances, {selections_seen} selections in total, regions agree within {worst:.1e}"
    ))
}

fn witness_corpus() -> Vec<(String, PolygonalNorm)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..100 {
        let half = rng.gen_range(2..=10);
        out.push((
            format!("random {i}"),
            random_symmetric_polygon(&mut rng, half),
        ));
    }
    for lambda in 3..=30 {
        let n = make_lambda_norm(lambda).expect("lambda >= 2").norm;
        out.push((format!("lambda {lambda}"), n.clone()));
        if lambda % 3 == 0 {
            let m = [[1.3, 0.4], [-0.2, 0.8]];
            out.push((
                format!("lambda {lambda} sheared"),
                n.linear_image(m).expect("invertible"),
            ));
        }
    }
    let sharp = PolygonalNorm::new(&[
        p(1., 0.),
        p(0.25, 1.),
        p(-0.25, 1.),
        p(-1., 0.),
        p(-0.25, -1.),
        p(0.25, -1.),
    ]);
    out.push(("sharp hexagon".into(), sharp.expect("valid")));
    let long = PolygonalNorm::new(&[
        p(2., 0.),
        p(1., 1.),
        p(-1., 1.),
        p(-2., 0.),
        p(-1., -1.),
        p(1., -1.),
    ]);
    out.push(("long hexagon".into(), long.expect("valid")));
    out.push(("diamond".into(), diamond()));
    out
}

fn criterion7() -> Outcome {
    let mut fired = [0usize; 3];
    let corpus = witness_corpus();
    for (name, norm) in &corpus {
        for (ci, c) in Condition::ALL.into_iter().enumerate() {
            let Some(triple) = check_condition(norm, c) else {
                continue;
            };
            if !triple.is_sound(norm) {
                return Err(format!("{name}: unsound triple for condition {c}"));
            }
            let sol = solve_witness(norm, &triple).map_err(|e| format!("{name}: {e}"))?;
            let ok = match c {
                Condition::TwoEdgesOneVertex => sol.kind() != RegionKind::Point,
                _ => sol.kind() == c.expected_kind(),
            };
            if !ok {
                return Err(format!(
                    "{name}: condition {c} witness solved to a {}",
                    sol.kind()
                ));
            }
            fired[ci] += 1;
        }
    }
    if fired.contains(&0) {
        return Err(format!("some condition never fired: {fired:?}"));
    }
    Ok(format!(
        "{} norms; witnesses checked for condition 1: {}, 2: {}, 3: {}",
        corpus.len(),
        fired[0],
        fired[1],
        fired[2]
    ))
}

fn criterion8() -> Outcome {
    let d = diamond();
    if uniqueness_verdict(&d).map_err(|e| e.to_string())? != Verdict::UniqueForAllTriples {
        return Err("diamond verdict is not unique".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..1000 {
        let pts: Vec<Point2> = (0..3)
            .map(|_| p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
            .collect();
        let sol = ft_solve(&d, &pts).map_err(|e| format!("triple {i}: {e}"))?;
        if sol.kind() != RegionKind::Point {
            return Err(format!("triple {i} solved to a {}", sol.kind()));
        }
    }
    Ok("diamond is unique; 1000 random triples solve to points".into())
}

fn random_admissible(rng: &mut ChaCha8Rng) -> ([Point2; 3], Point2) {
    loop {
        let x: [Point2; 3] =
            std::array::from_fn(|_| p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)));
        if let Some(t) = torricelli_point(x[0], x[1], x[2]) {
            return (x, t);
        }
    }
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_angle = 0.0f64;
    for _ in 0..100 {
        let (x, t) = random_admissible(&mut rng);
        for i in 0..3 {
            let a = viewing_angle(t, x[i], x[(i + 1) % 3]);
            worst_angle = worst_angle.max((a - 2.0 * PI / 3.0).abs());
        }
    }
    if worst_angle > 1e-7 {
        return Err(format!("viewing angle off by {worst_angle:e}"));
    }
    let tol = Tol::default();
    let mut worst = 0.0f64;
    for lambda in [3, 6, 9] {
        let norm = make_lambda_norm(lambda).map_err(|e| e.to_string())?.norm;
        for i in 0..100 {
            let (x, _) = random_admissible(&mut rng);
            let built = lambda_triangle_solution(lambda, x)
                .map_err(|e| format!("lambda {lambda}, triangle {i}: {e}"))?;
            let generic = ft_solve(&norm, &x).map_err(|e| e.to_string())?;
            let h = hausdorff(built.region.vertices(), generic.region.vertices());
            if built.kind() != generic.kind() || h > 1e-8 {
                return Err(format!(
                    "lambda {lambda}, triangle {i}: {} vs {} at {h:e}",
                    built.kind(),
                    generic.kind()
                ));
            }
            if built.kind() == RegionKind::Polygon
                && !built.region.contains(built.certificate.p, &tol)
            {
                return Err(format!(
                    "lambda {lambda}, triangle {i}: region misses the Torricelli point"
                ));
            }
            worst = worst.max(h);
        }
    }
    Ok(format!(
        "angles within {worst_angle:.1e} rad; 300 triangle solutions agree within {worst:.1e}"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cases: Vec<(PolygonalNorm, Vec<Point2>, FtSolution)> = instances()
        .into_iter()
        .filter_map(|(n, pts)| match ft_solve(&n, &pts) {
            Ok(sol) => Some((n, pts, sol)),
            Err(e) => {
                println!("instance failed to solve: {e}");
                None
            }
        })
        .collect();
    let solved_all = cases.len() == INSTANCES;

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "lambda classification", criterion1()),
        (2, "hexagon triangle", criterion2()),
        (3, "odd collinear sets", criterion3()),
        (
            4,
            "certificate soundness",
            if solved_all {
                criterion4(&cases)
            } else {
                Err("some instances failed to solve".into())
            },
        ),
        (5, "oracle equivalence", criterion5(&cases)),
        (6, "choice independence", criterion6(&cases)),
        (7, "witness constructivity", criterion7()),
        (8, "manhattan uniqueness", criterion8()),
        (9, "torricelli point", criterion9()),
    ];

    let mut failed = 0;
    for (k, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {k} ({name}): PASS: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {k} ({name}): FAIL: {why}");
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
