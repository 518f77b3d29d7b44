use std::f64::consts::PI;

use ftplane::geometry::{hausdorff, RegionKind, Vec2};
use ftplane::lambda::{
    classify_lambda, classify_range, lambda_triangle_solution, make_lambda_norm,
    rotate_about_centroid,
};
use ftplane::solver::ft_solve;
use ftplane::uniqueness::{
    check_condition1, check_condition2, check_condition3, uniqueness_verdict, Condition,
};

#[test]
fn mod_three_law_up_to_thirty() {
    for (lambda, verdict) in classify_range(2..=30) {
        let v = verdict.unwrap();
        assert_eq!(v.is_unique(), lambda % 3 != 0, "lambda {lambda}");
        if lambda % 3 == 0 {
            assert_eq!(v.condition(), Some(Condition::ThreeEdges));
        }
    }
}

#[test]
fn lambda_planes_never_meet_condition3() {
    for lambda in 2..=30 {
        let n = make_lambda_norm(lambda).unwrap().norm;
        assert!(check_condition3(&n).is_none(), "lambda {lambda}");
        if lambda % 3 != 0 {
            assert!(check_condition1(&n).is_none(), "lambda {lambda}");
            assert!(check_condition2(&n).is_none(), "lambda {lambda}");
        }
    }
}

#[test]
fn verdict_survives_rotation_and_linear_maps() {
    for lambda in 2..=12u32 {
        let n = make_lambda_norm(lambda).unwrap().norm;
        let a = 0.37f64;
        let rot = [[a.cos(), -a.sin()], [a.sin(), a.cos()]];
        let shear = [[2.0, 0.5], [0.1, 0.7]];
        for m in [rot, shear] {
            let image = n.linear_image(m).unwrap();
            assert_eq!(
                uniqueness_verdict(&image).unwrap().is_unique(),
                classify_lambda(lambda).unwrap().is_unique(),
                "lambda {lambda}"
            );
        }
    }
}

#[test]
fn rotated_triangles_switch_between_polygon_and_point() {
    let tri = [
        Vec2::new(0., 0.),
        Vec2::new(1., 0.),
        Vec2::new(0.5, 3f64.sqrt() / 2.),
    ];
    for lambda in [3u32, 6, 9] {
        let step = PI / lambda as f64;
        // Directions from the centre hit edge midpoints at rotation π/2λ
        // relative to a vertex-aligned position.
        let aligned = rotate_about_centroid(tri, PI / 6.0);
        let at_vertex = lambda_triangle_solution(lambda, aligned).unwrap();
        assert_eq!(at_vertex.kind(), RegionKind::Point, "lambda {lambda}");
        let off = rotate_about_centroid(aligned, step / 2.0);
        let polygon = lambda_triangle_solution(lambda, off).unwrap();
        assert_eq!(polygon.kind(), RegionKind::Polygon, "lambda {lambda}");
        let n = make_lambda_norm(lambda).unwrap().norm;
        let generic = ft_solve(&n, &off).unwrap();
        assert!(hausdorff(polygon.region.vertices(), generic.region.vertices()) < 1e-9);
    }
}
