//! JSON documents read and written by the command-line tool.
//!
//! Parsers never panic: malformed text, wrong shapes, non-finite numbers and
//! oversized inputs all come back as [`DocError`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point2, Region, RegionKind, Tol, Vec2};
use crate::lambda::{make_lambda_norm, LambdaError};
use crate::norm::{Functional, NormError, PolygonalNorm};
use crate::solver::FtSolution;
use crate::uniqueness::{Condition, Verdict};

pub const MAX_NORM_VERTICES: usize = 1024;
pub const MAX_LAMBDA: u32 = 512;
pub const MAX_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Json(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> DocError {
    DocError::Invalid(msg.into())
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_pair(v: Vec2) -> [f64; 2] {
    [round_sig(v.x), round_sig(v.y)]
}

fn check_pairs(pairs: &[[f64; 2]], what: &str) -> Result<Vec<Point2>, DocError> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &[x, y])| {
            let v = Vec2::new(x, y);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(format!("{what} {i} is not finite")))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormDocument {
    Polygon { vertices: Vec<[f64; 2]> },
    Lambda { lambda: u32 },
}

impl NormDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: NormDocument = serde_json::from_str(text)?;
        match &doc {
            NormDocument::Polygon { vertices } if vertices.len() > MAX_NORM_VERTICES => {
                Err(invalid(format!(
                    "{} vertices exceed the limit of {MAX_NORM_VERTICES}",
                    vertices.len()
                )))
            }
            NormDocument::Lambda { lambda } if *lambda > MAX_LAMBDA => Err(invalid(format!(
                "lambda {lambda} exceeds the limit of {MAX_LAMBDA}"
            ))),
            _ => Ok(doc),
        }
    }

    pub fn to_norm(&self, tol: Tol) -> Result<PolygonalNorm, DocError> {
        match self {
            NormDocument::Polygon { vertices } => {
                let v = check_pairs(vertices, "vertex")?;
                Ok(PolygonalNorm::with_tol(&v, tol)?)
            }
            NormDocument::Lambda { lambda } => {
                Ok(make_lambda_norm(*lambda)?.norm.with_tolerance(tol))
            }
        }
    }

    pub fn from_norm(norm: &PolygonalNorm) -> Self {
        NormDocument::Polygon {
            vertices: norm.vertices().iter().map(|&v| round_pair(v)).collect(),
        }
    }
}

pub fn parse_norm(text: &str, tol: Tol) -> Result<PolygonalNorm, DocError> {
    NormDocument::parse(text)?.to_norm(tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsDocument {
    pub points: Vec<[f64; 2]>,
}

impl PointsDocument {
    pub fn from_points(points: &[Point2]) -> Self {
        PointsDocument {
            points: points.iter().map(|&v| round_pair(v)).collect(),
        }
    }
}

pub fn parse_points(text: &str) -> Result<Vec<Point2>, DocError> {
    let doc: PointsDocument = serde_json::from_str(text)?;
    if doc.points.is_empty() {
        return Err(invalid("no points"));
    }
    if doc.points.len() > MAX_POINTS {
        return Err(invalid(format!(
            "{} points exceed the limit of {MAX_POINTS}",
            doc.points.len()
        )));
    }
    check_pairs(&doc.points, "point")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub p: [f64; 2],
    pub functionals: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub kind: RegionKind,
    pub vertices: Vec<[f64; 2]>,
    pub objective: f64,
    pub certificate: CertificateDocument,
}

impl SolutionDocument {
    pub fn from_solution(sol: &FtSolution) -> Self {
        SolutionDocument {
            kind: sol.kind(),
            vertices: sol
                .region
                .vertices()
                .iter()
                .map(|&v| round_pair(v))
                .collect(),
            objective: round_sig(sol.objective),
            certificate: CertificateDocument {
                p: round_pair(sol.certificate.p),
                functionals: sol
                    .certificate
                    .functionals
                    .iter()
                    .map(|f| round_pair(f.vec()))
                    .collect(),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: SolutionDocument = serde_json::from_str(text)?;
        let n = doc.vertices.len();
        let ok = match doc.kind {
            RegionKind::Empty => false,
            RegionKind::Point => n == 1,
            RegionKind::Segment => n == 2,
            RegionKind::Polygon => (3..=MAX_POINTS).contains(&n),
        };
        if !ok {
            return Err(invalid(format!("{} solution with {n} vertices", doc.kind)));
        }
        if doc.certificate.functionals.len() > MAX_POINTS {
            return Err(invalid("too many functionals"));
        }
        check_pairs(&doc.vertices, "vertex")?;
        check_pairs(&doc.certificate.functionals, "functional")?;
        check_pairs(&[doc.certificate.p], "certificate point")?;
        if !doc.objective.is_finite() || doc.objective < 0.0 {
            return Err(invalid("objective must be finite and non-negative"));
        }
        Ok(doc)
    }

    /// The region, rebuilt from the listed vertices.
    pub fn region(&self, tol: &Tol) -> Region {
        let pts: Vec<Point2> = self.vertices.iter().map(|&v| v.into()).collect();
        Region::from_vertices(&pts, tol)
    }

    pub fn functionals(&self) -> Vec<Functional> {
        self.certificate
            .functionals
            .iter()
            .map(|&[a, b]| Functional::new(a, b))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictTag {
    Unique,
    Nonunique,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDocument {
    pub verdict: VerdictTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_kind: Option<RegionKind>,
}

impl VerdictDocument {
    pub fn from_verdict(v: &Verdict) -> Self {
        match v {
            Verdict::UniqueForAllTriples => VerdictDocument {
                verdict: VerdictTag::Unique,
                condition: None,
                witness: None,
                region_kind: None,
            },
            Verdict::NonUnique {
                triple,
                witness,
                region,
                ..
            } => VerdictDocument {
                verdict: VerdictTag::Nonunique,
                condition: Some(triple.condition.number()),
                witness: Some(witness.iter().map(|&w| round_pair(w)).collect()),
                region_kind: Some(region.kind()),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: VerdictDocument = serde_json::from_str(text)?;
        match doc.verdict {
            VerdictTag::Unique => {
                if doc.condition.is_some() || doc.witness.is_some() || doc.region_kind.is_some() {
                    return Err(invalid("a unique verdict carries no witness"));
                }
            }
            VerdictTag::Nonunique => {
                let c = doc.condition.ok_or_else(|| invalid("missing condition"))?;
                Condition::from_number(c)
                    .ok_or_else(|| invalid(format!("unknown condition {c}")))?;
                let w = doc
                    .witness
                    .as_ref()
                    .ok_or_else(|| invalid("missing witness"))?;
                if w.len() != 3 {
                    return Err(invalid(format!(
                        "witness has {} points, expected 3",
                        w.len()
                    )));
                }
                check_pairs(w, "witness point")?;
                match doc.region_kind {
                    Some(RegionKind::Segment | RegionKind::Polygon) => {}
                    _ => return Err(invalid("region_kind must be segment or polygon")),
                }
            }
        }
        Ok(doc)
    }
}

/// Indented JSON with a trailing newline; arrays of scalars stay on one line.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push_str(&v.to_string());
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::regular;
    use crate::solver::ft_solve;
    use crate::uniqueness::uniqueness_verdict;
    use proptest::prelude::*;

    #[test]
    fn norm_documents() {
        let n = parse_norm(r#"{"type":"lambda","lambda":3}"#, Tol::default()).unwrap();
        assert_eq!(n.len(), 6);
        let n = parse_norm(
            r#"{"type":"polygon","vertices":[[1,0],[0,1],[-1,0],[0,-1]]}"#,
            Tol::default(),
        )
        .unwrap();
        assert_eq!(n.len(), 4);
        assert!(matches!(
            parse_norm(r#"{"type":"lambda","lambda":1}"#, Tol::default()),
            Err(DocError::Lambda(LambdaError::LambdaTooSmall(1)))
        ));
        assert!(matches!(
            parse_norm(r#"{"type":"lambda","lambda":100000}"#, Tol::default()),
            Err(DocError::Invalid(_))
        ));
        assert!(matches!(
            parse_norm(
                r#"{"type":"polygon","vertices":[[1,0],[0,1],[-1,0]]}"#,
                Tol::default()
            ),
            Err(DocError::Norm(NormError::OddVertexCount(3)))
        ));
        for bad in [
            "",
            "{",
            "[]",
            r#"{"type":"circle"}"#,
            r#"{"type":"lambda","lambda":-3}"#,
            r#"{"type":"lambda","lambda":3,"extra":1}"#,
            r#"{"type":"polygon","vertices":[[1e400,0]]}"#,
        ] {
            assert!(parse_norm(bad, Tol::default()).is_err(), "{bad}");
        }
    }

    #[test]
    fn points_documents() {
        let p = parse_points(r#"{"points":[[0,0],[1,0.5]]}"#).unwrap();
        assert_eq!(p, vec![Vec2::new(0., 0.), Vec2::new(1., 0.5)]);
        assert!(parse_points(r#"{"points":[]}"#).is_err());
        assert!(parse_points(r#"{"points":[[0]]}"#).is_err());
        assert!(parse_points(r#"{"pts":[[0,0]]}"#).is_err());
    }

    #[test]
    fn solution_round_trip() {
        let h = regular(3).unwrap();
        let s3 = 3f64.sqrt();
        let pts = [
            Vec2::new(0., 0.),
            Vec2::new(1., 0.),
            Vec2::new(0.5, s3 / 2.),
        ];
        let sol = ft_solve(&h, &pts).unwrap();
        let doc = SolutionDocument::from_solution(&sol);
        let text = to_json(&doc);
        let back = SolutionDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.kind, RegionKind::Polygon);
        let r = back.region(&Tol::default());
        assert!(r.vertex_hausdorff(&sol.region) < 1e-9);
        assert!((back.objective - 2.0).abs() < 1e-9);
        assert!(SolutionDocument::parse(&text.replace("polygon", "point")).is_err());
    }

    #[test]
    fn verdict_documents() {
        let v = uniqueness_verdict(&regular(3).unwrap()).unwrap();
        let doc = VerdictDocument::from_verdict(&v);
        let text = to_json(&doc);
        assert!(text.contains(r#""verdict": "nonunique""#));
        assert!(text.contains(r#""region_kind": "polygon""#));
        assert_eq!(VerdictDocument::parse(&text).unwrap(), doc);

        let u = VerdictDocument::from_verdict(&Verdict::UniqueForAllTriples);
        assert_eq!(to_json(&u), "{\n  \"verdict\": \"unique\"\n}\n");
        assert!(VerdictDocument::parse(r#"{"verdict":"unique","condition":1}"#).is_err());
        assert!(VerdictDocument::parse(r#"{"verdict":"nonunique","condition":4,"witness":[[0,0],[1,0],[0,1]],"region_kind":"segment"}"#).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_sig(-1234567.8912345678), -1234567.89123);
        assert_eq!(round_sig(0.0), 0.0);
    }

    proptest! {
        #[test]
        fn points_round_trip(pts in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..20)) {
            let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Vec2::new(x, y)).collect();
            let doc = PointsDocument::from_points(&pts);
            let back = parse_points(&to_json(&doc)).unwrap();
            for (a, b) in pts.iter().zip(&back) {
                prop_assert!((a.x - b.x).abs() <= 1e-11 * a.x.abs().max(1e-300));
                prop_assert!((a.y - b.y).abs() <= 1e-11 * a.y.abs().max(1e-300));
            }
        }

        #[test]
        fn parsers_never_panic(s in ".{0,200}") {
            let _ = NormDocument::parse(&s);
            let _ = parse_points(&s);
            let _ = SolutionDocument::parse(&s);
            let _ = VerdictDocument::parse(&s);
        }
    }
}
