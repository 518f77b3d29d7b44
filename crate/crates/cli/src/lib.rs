//! Commands behind the `ftplane` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ftplane::doc::{
    parse_norm, parse_points, to_json, NormDocument, SolutionDocument, VerdictDocument,
};
use ftplane::geometry::{Point2, RegionKind, Tol, Vec2};
use ftplane::lambda::{classify_range, make_lambda_norm};
use ftplane::norm::{diamond, regular, PolygonalNorm};
use ftplane::oracle::self_check;
use ftplane::solver::{ConeShape, FtSolution};
use ftplane::uniqueness::{solve_witness, Verdict};
use ftplane::{ft_solve, uniqueness_verdict};

#[derive(Debug, Parser)]
#[command(
    name = "ftplane",
    version,
    about = "Fermat-Torricelli sets in polygonal-norm planes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a point set and print its solution document.
    Solve(SolveArgs),
    /// Decide whether every three-point set has a unique optimum.
    Uniqueness(NormArgs),
    /// Classify the 2λ-gon planes for λ = 2..max.
    Lambda(LambdaArgs),
    /// Print and solve the counterexample triple of a norm, if any.
    Witness(WitnessArgs),
    /// Solve a point set and write only the SVG figure.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    /// Norm document, or one of diamond, square, hexagon, octagon.
    #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
    pub norm: Option<String>,
    /// Use the regular 2K-gon instead of a norm document.
    #[arg(long, value_name = "K")]
    pub lambda: Option<u32>,
    /// Comparison tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub norm: NormArgs,
    /// Points document, or the preset equilateral.
    #[arg(long)]
    pub points: String,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Probe the result with this seed and fail if the probe disagrees.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct LambdaArgs {
    #[arg(long, default_value_t = 30)]
    pub max: u32,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub norm: NormArgs,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub norm: NormArgs,
    #[arg(long)]
    pub points: String,
    #[arg(long, value_name = "PATH")]
    pub svg: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, message: String },
    Lib(ftplane::Error),
    Check(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Check(m) => write!(f, "self-check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl<E: Into<ftplane::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    /// 1 for bad input, 2 when a result failed its own verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Lib(e) if !e.is_internal() => 1,
            CliError::Lib(_) | CliError::Check(_) => 2,
        }
    }
}

const EQUILATERAL: &str = r#"{"points":[[0,0],[1,0],[0.5,0.8660254037844386]]}"#;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_norm(args: &NormArgs) -> Result<PolygonalNorm, CliError> {
    let tol = Tol::new(args.tol)?;
    if let Some(k) = args.lambda {
        return Ok(make_lambda_norm(k)?.norm.with_tolerance(tol));
    }
    let spec = args.norm.as_deref().unwrap_or_default();
    let path = Path::new(spec);
    if path.exists() {
        return Ok(parse_norm(&read(path)?, tol)?);
    }
    let norm = match spec {
        "diamond" => diamond(),
        "square" => PolygonalNorm::new(&[
            Vec2::new(1., 1.),
            Vec2::new(-1., 1.),
            Vec2::new(-1., -1.),
            Vec2::new(1., -1.),
        ])?,
        "hexagon" => regular(3)?,
        "octagon" => regular(4)?,
        _ => {
            return Err(CliError::Usage(format!(
                "no norm file or preset named {spec:?}"
            )))
        }
    };
    Ok(norm.with_tolerance(tol))
}

pub fn load_points(spec: &str) -> Result<Vec<Point2>, CliError> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(parse_points(&read(path)?)?);
    }
    match spec {
        "equilateral" => Ok(parse_points(EQUILATERAL)?),
        _ => Err(CliError::Usage(format!(
            "no points file or preset named {spec:?}"
        ))),
    }
}

/// Runs one command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve(a) => {
            let norm = load_norm(&a.norm)?;
            let pts = load_points(&a.points)?;
            let sol = ft_solve(&norm, &pts)?;
            if let Some(seed) = a.seed {
                let report = self_check(&norm, &pts, &sol.region, sol.objective, seed);
                if !report.is_clean(1e-8) {
                    return Err(CliError::Check(format!(
                        "inside deviation {:e}, outside excess {:e}",
                        report.max_inside_deviation, report.min_outside_excess
                    )));
                }
            }
            if let Some(path) = &a.svg {
                write(path, &render_svg(&norm, &pts, Some(&sol)))?;
            }
            Ok(to_json(&SolutionDocument::from_solution(&sol)))
        }
        Command::Uniqueness(a) => {
            let norm = load_norm(a)?;
            let v = uniqueness_verdict(&norm)?;
            Ok(to_json(&VerdictDocument::from_verdict(&v)))
        }
        Command::Lambda(a) => lambda_table(a),
        Command::Witness(a) => {
            let norm = load_norm(&a.norm)?;
            let v = uniqueness_verdict(&norm)?;
            let Verdict::NonUnique {
                triple, witness, ..
            } = v
            else {
                if let Some(path) = &a.svg {
                    write(path, &render_svg(&norm, &[], None))?;
                }
                return Ok(to_json(&json!({ "verdict": "unique" })));
            };
            let sol = solve_witness(&norm, &triple)?;
            if let Some(path) = &a.svg {
                write(path, &render_svg(&norm, &witness, Some(&sol)))?;
            }
            let doc = VerdictDocument::from_verdict(&Verdict::NonUnique {
                triple,
                witness,
                expected: triple.condition.expected_kind(),
                region: sol.region.clone(),
            });
            Ok(to_json(&json!({
                "condition": triple.condition.number(),
                "witness": doc.witness,
                "norm": NormDocument::from_norm(&norm),
                "solution": SolutionDocument::from_solution(&sol),
            })))
        }
        Command::Render(a) => {
            let norm = load_norm(&a.norm)?;
            let pts = load_points(&a.points)?;
            let sol = ft_solve(&norm, &pts)?;
            write(&a.svg, &render_svg(&norm, &pts, Some(&sol)))?;
            Ok(String::new())
        }
    }
}

fn lambda_table(a: &LambdaArgs) -> Result<String, CliError> {
    if a.max < 2 {
        return Err(CliError::Usage(format!(
            "--max must be at least 2, got {}",
            a.max
        )));
    }
    if a.max > ftplane::doc::MAX_LAMBDA {
        return Err(CliError::Usage(format!(
            "--max must be at most {}, got {}",
            ftplane::doc::MAX_LAMBDA,
            a.max
        )));
    }
    let rows = classify_range(2..=a.max);
    let mut verdicts = Vec::with_capacity(rows.len());
    for (l, v) in rows {
        verdicts.push((l, v?));
    }
    if a.json {
        let arr: Vec<Value> = verdicts
            .iter()
            .map(|(l, v)| {
                let mut obj = serde_json::to_value(VerdictDocument::from_verdict(v))
                    .expect("verdict documents serialize");
                obj["lambda"] = json!(l);
                obj
            })
            .collect();
        return Ok(to_json(&arr));
    }
    let mut out = format!(
        "{:<7} {:<10} {:<10} witness\n",
        "lambda", "verdict", "condition"
    );
    for (l, v) in &verdicts {
        let doc = VerdictDocument::from_verdict(v);
        let (verdict, cond, wit) = match (&doc.condition, &doc.witness) {
            (Some(c), Some(w)) => (
                "nonunique",
                c.to_string(),
                w.iter()
                    .map(|&[x, y]| format!("({}, {})", fmt_num(x), fmt_num(y)))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            _ => ("unique", "-".to_string(), "-".to_string()),
        };
        let _ = writeln!(out, "{l:<7} {verdict:<10} {cond:<10} {wit}");
    }
    Ok(out)
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// `x,y` with y flipped, so the figure reads with y pointing up.
fn svg_pt(p: Point2) -> String {
    format!("{},{}", fmt_num(p.x), fmt_num(-p.y))
}

fn path_d(pts: &[Point2], closed: bool) -> String {
    let mut d = String::new();
    for (i, &p) in pts.iter().enumerate() {
        d.push_str(if i == 0 { "M" } else { " L" });
        d.push_str(&svg_pt(p));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// SVG figure: the unit polygon (centred at the certificate point), the
/// terminals, the optimal set and the cone boundaries.
pub fn render_svg(
    norm: &PolygonalNorm,
    points: &[Point2],
    solution: Option<&FtSolution>,
) -> String {
    let center = solution.map_or(Vec2::ZERO, |s| s.certificate.p);
    let unit: Vec<Point2> = norm.vertices().iter().map(|&v| center + v).collect();

    let mut all: Vec<Point2> = unit.clone();
    all.extend_from_slice(points);
    if let Some(s) = solution {
        all.extend_from_slice(s.region.vertices());
    }
    let (mut lo, mut hi) = (all[0], all[0]);
    for q in &all {
        lo = Vec2::new(lo.x.min(q.x), lo.y.min(q.y));
        hi = Vec2::new(hi.x.max(q.x), hi.y.max(q.y));
    }
    let span = (hi - lo).x.max((hi - lo).y).max(1e-9);
    let pad = 0.1 * span;
    let dot = 0.012 * span;
    let stroke = 0.004 * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt_num(lo.x - pad),
        fmt_num(-hi.y - pad),
        fmt_num(hi.x - lo.x + 2.0 * pad),
        fmt_num(hi.y - lo.y + 2.0 * pad)
    );
    let _ = writeln!(
        out,
        r#"  <path class="norm" d="{}" fill="none" stroke="gray" stroke-width="{}"/>"#,
        path_d(&unit, true),
        fmt_num(stroke)
    );
    if let Some(s) = solution {
        let reach = 2.0 * span;
        for c in &s.cones {
            let x = c.vertex;
            let d = match c.shape {
                ConeShape::Ray { dir } => path_d(&[x, x + dir.normalized() * reach], false),
                ConeShape::Angle { d1, d2 } => path_d(
                    &[x + d1.normalized() * reach, x, x + d2.normalized() * reach],
                    false,
                ),
            };
            let _ = writeln!(
                out,
                r#"  <path class="cone" d="{d}" fill="none" stroke="steelblue" stroke-width="{}"/>"#,
                fmt_num(stroke)
            );
        }
        let r = s.region.vertices();
        match s.kind() {
            RegionKind::Empty => {}
            RegionKind::Point => {
                let _ = writeln!(
                    out,
                    r#"  <circle class="region" cx="{}" cy="{}" r="{}" fill="crimson"/>"#,
                    fmt_num(r[0].x),
                    fmt_num(-r[0].y),
                    fmt_num(1.5 * dot)
                );
            }
            kind => {
                let _ = writeln!(
                    out,
                    r#"  <path class="region" d="{}" fill="crimson" fill-opacity="0.4" stroke="crimson" stroke-width="{}"/>"#,
                    path_d(r, kind == RegionKind::Polygon),
                    fmt_num(stroke)
                );
            }
        }
    }
    for &p in points {
        let _ = writeln!(
            out,
            r#"  <circle class="terminal" cx="{}" cy="{}" r="{}" fill="black"/>"#,
            fmt_num(p.x),
            fmt_num(-p.y),
            fmt_num(dot)
        );
    }
    out.push_str("</svg>\n");
    out
}
