use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wconvex::construct::{
    make_cut_scene_2d, make_generalized_polygon, random_cut_scene, CutMode, CutScene, CutSceneSpec,
    E3Spec,
};
use wconvex::geom::{ConvexPoly, Point2, Scalar};
use wconvex::io::{
    parse_point, render_svg, ConstructionDoc, CutDoc, LoadedScene, Rat, SceneDocument, SvgStyle,
};
use wconvex::nd::{classify_point_nd, NdClassification};
use wconvex::scene::Scene2;
use wconvex::trap::{
    certify_trap_radius, classify_point, region_components, symmetric_difference_area, trap_region,
    weakly_in_mode, CellLabel, Mode, RegionCells,
};
use wconvex::verify::{run_selected, Status, CRITERIA};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Exact trapped-point analysis for open sets built from convex pieces.
#[derive(Parser)]
#[command(name = "wconvex", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a scene document for one of the built-in constructions.
    Generate(GenerateArgs),
    /// Classify one point of a scene.
    Classify(ClassifyArgs),
    /// Compute the labelled cell decomposition of a planar scene.
    Region(RegionArgs),
    /// Check weak convexity / semiconvexity and the predicted trapped set.
    Check(CheckArgs),
    /// Count connected components of a planar scene and of its trapped sets.
    Components(SceneArgs),
    /// Build and re-check an openness certificate for a trapped point.
    Certify(CertifyArgs),
    /// Run the verification suite.
    VerifyTheorems(VerifyArgs),
    /// Render the cell decomposition of a planar scene as SVG.
    RenderSvg(RenderArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    /// The standard cut square with a triangular hole.
    #[value(alias = "paper-e2", alias = "cut-scene")]
    E2,
    /// A cut scene with random D and P drawn from the seed.
    RandomCut,
    GeneralizedPolygon,
    E3Bounded,
    E3Stacked,
    EnProduct,
    Empty,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// rays | lines | none
    #[arg(long, default_value = "lines")]
    mode: CutMode,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long = "floor-budget", default_value_t = 8)]
    floor_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SceneArgs {
    #[arg(long)]
    scene: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Comma-separated rationals, e.g. 1/2,-3
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Directions sampled in dimension three and above.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Overrides the floor budget of a stacked scene.
    #[arg(long = "floor-budget")]
    floor_budget: Option<usize>,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    scene: PathBuf,
    /// ray | line; both when omitted
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, value_parser = parse_mode, default_value = "ray")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report JSON destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Comma-separated criterion ids; all when omitted.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, alias = "svg")]
    out: Option<PathBuf>,
    #[arg(long)]
    title: Option<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "ray" | "rays" => Ok(Mode::Ray),
        "line" | "lines" => Ok(Mode::Line),
        other => Err(format!("unknown mode {other:?} (expected ray or line)")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Classify(a) => classify(a),
        Cmd::Region(a) => region(a),
        Cmd::Check(a) => check(a),
        Cmd::Components(a) => components(a),
        Cmd::Certify(a) => certify(a),
        Cmd::VerifyTheorems(a) => verify(a),
        Cmd::RenderSvg(a) => render(a),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_doc(path: &Path) -> Result<SceneDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SceneDocument::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_planar(path: &Path) -> Result<(Scene2, Vec<ConvexPoly>)> {
    match load_doc(path)?.load()? {
        LoadedScene::Planar { scene, predicted } => Ok((scene, predicted)),
        LoadedScene::Solid(_) => bail!("{} is not a planar scene", path.display()),
    }
}

fn point2(s: &str) -> Result<Point2> {
    match parse_point(s)?.as_slice() {
        [x, y] => Ok(Point2::new(x.clone(), y.clone())),
        other => bail!("expected two coordinates, got {}", other.len()),
    }
}

fn cut_doc(cs: &CutScene, seed: Option<u64>) -> SceneDocument {
    let mut doc = SceneDocument::planar(&cs.scene);
    if let Some(p) = cs.predicted() {
        doc = doc.with_prediction(std::slice::from_ref(p));
    }
    doc.construction = Some(ConstructionDoc::CutScene(CutDoc::from_spec(&cs.spec)));
    doc.seed = seed;
    doc
}

fn axis_doc(spec: &E3Spec) -> [Rat; 3] {
    spec.axis.clone().map(Rat)
}

fn generate(a: GenerateArgs) -> Result<u8> {
    let doc = match a.family {
        Family::E2 => cut_doc(&make_cut_scene_2d(&CutSceneSpec::standard(a.mode))?, None),
        Family::RandomCut => cut_doc(&random_cut_scene(a.seed, a.mode)?, Some(a.seed)),
        Family::GeneralizedPolygon => {
            let q = make_generalized_polygon(a.k)?;
            let mut doc = SceneDocument::planar(&Scene2::new(vec![q]));
            doc.construction = Some(ConstructionDoc::GeneralizedPolygon { k: a.k });
            doc
        }
        Family::Empty => SceneDocument::planar(&Scene2::empty()),
        Family::E3Bounded | Family::E3Stacked | Family::EnProduct => {
            let bounded = E3Spec {
                cut: CutSceneSpec::standard(a.mode),
                ..E3Spec::bounded_default()
            };
            let c = match a.family {
                Family::E3Bounded => ConstructionDoc::E3Bounded {
                    cut: CutDoc::from_spec(&bounded.cut),
                    axis: axis_doc(&bounded),
                },
                Family::E3Stacked => {
                    let spec = E3Spec {
                        cut: CutSceneSpec::standard(a.mode),
                        ..E3Spec::stacked_default()
                    };
                    ConstructionDoc::E3Stacked {
                        cut: CutDoc::from_spec(&spec.cut),
                        axis: axis_doc(&spec),
                        floor_budget: a.floor_budget,
                    }
                }
                _ => {
                    if a.n < 4 {
                        bail!("products need n >= 4; use e3-bounded for n = 3");
                    }
                    let mut c = ConstructionDoc::E3Bounded {
                        cut: CutDoc::from_spec(&bounded.cut),
                        axis: axis_doc(&bounded),
                    };
                    for n in 4..=a.n {
                        c = ConstructionDoc::EnProduct {
                            inner: Box::new(c),
                            n,
                        };
                    }
                    c
                }
            };
            let doc = SceneDocument::solid(c);
            // fail early on constructions that do not build
            doc.load()?;
            doc
        }
    };
    emit(a.out.as_deref(), &doc.to_json())?;
    Ok(EXIT_OK)
}

fn classify(a: ClassifyArgs) -> Result<u8> {
    let mut doc = load_doc(&a.scene)?;
    if let (Some(k), Some(ConstructionDoc::E3Stacked { floor_budget, .. })) =
        (a.floor_budget, doc.construction.as_mut())
    {
        *floor_budget = k;
    }
    let coords = parse_point(&a.point)?;
    if coords.len() != doc.dim {
        bail!(
            "point has {} coordinates but the scene has dimension {}",
            coords.len(),
            doc.dim
        );
    }
    match doc.load()? {
        LoadedScene::Planar { scene, .. } => {
            let y = Point2::new(coords[0].clone(), coords[1].clone());
            println!("{}", classify_point(&scene, &y));
            Ok(EXIT_OK)
        }
        LoadedScene::Solid(s) => {
            let c = classify_point_nd(&s, &coords, a.samples, a.seed)?;
            println!("{c}");
            if let NdClassification::EvidenceTrapped { witnesses, .. } = &c {
                let floors = witnesses.iter().map(|(_, w)| w.floors).max().unwrap_or(0);
                println!("max floors entered: {floors}");
            }
            Ok(match c {
                NdClassification::Inconclusive { .. } => EXIT_INCONCLUSIVE,
                _ => EXIT_OK,
            })
        }
    }
}

fn pt_json(p: &Point2) -> Value {
    json!([Rat(p.x.clone()).to_string(), Rat(p.y.clone()).to_string()])
}

fn rat_json(s: &Scalar) -> Value {
    Value::String(Rat(s.clone()).to_string())
}

const LABELS: [CellLabel; 4] = [
    CellLabel::InE,
    CellLabel::TrappedBoth,
    CellLabel::TrappedLinesOnly,
    CellLabel::Free,
];

fn region_json(rc: &RegionCells) -> Value {
    let cells: Vec<Value> = rc
        .cells
        .iter()
        .map(|c| {
            json!({
                "label": c.label.name(),
                "polygon": c.poly.vertices().iter().map(pt_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let areas: serde_json::Map<String, Value> = LABELS
        .iter()
        .map(|&l| (l.name().to_string(), rat_json(&rc.area_with(|m| m == l))))
        .collect();
    json!({
        "bbox": [pt_json(&rc.bbox.min), pt_json(&rc.bbox.max)],
        "areas": areas,
        "cells": cells,
    })
}

fn region(a: RegionArgs) -> Result<u8> {
    let (scene, _) = load_planar(&a.scene)?;
    let rc = trap_region(&scene)?;
    for l in LABELS {
        let n = rc.cells.iter().filter(|c| c.label == l).count();
        println!(
            "{:<17} {:>5} cells, area {}",
            l.name(),
            n,
            rc.area_with(|m| m == l)
        );
    }
    if let Some(p) = &a.out {
        let mut text = serde_json::to_string_pretty(&region_json(&rc))?;
        text.push('\n');
        emit(Some(p), &text)?;
    }
    if let Some(p) = &a.svg {
        emit(Some(p), &render_svg(&rc, &SvgStyle::default()))?;
    }
    Ok(EXIT_OK)
}

fn check(a: CheckArgs) -> Result<u8> {
    let (scene, predicted) = load_planar(&a.scene)?;
    let modes = match a.mode {
        Some(m) => vec![m],
        None => vec![Mode::Ray, Mode::Line],
    };
    let mut ok = true;
    for &m in &modes {
        let what = match m {
            Mode::Ray => "weakly semiconvex",
            Mode::Line => "weakly convex",
        };
        match weakly_in_mode(&scene, m) {
            (true, _) => println!("{what}: yes"),
            (false, at) => {
                ok = false;
                let at = at.map(|p| p.to_string()).unwrap_or_default();
                println!("{what}: no, every {m} from {at} meets the set");
            }
        }
    }
    if let [p] = predicted.as_slice() {
        let rc = trap_region(&scene)?;
        for &m in &modes {
            let d = symmetric_difference_area(&rc, m, p);
            let verdict = if d == Scalar::from_integer(0.into()) {
                "matches"
            } else {
                "differs from"
            };
            println!("{m}-trapped region {verdict} the prediction (symmetric difference area {d})");
            ok &= verdict == "matches";
        }
    } else if !predicted.is_empty() {
        println!("prediction with {} polygons not compared", predicted.len());
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn components(a: SceneArgs) -> Result<u8> {
    let (scene, _) = load_planar(&a.scene)?;
    println!("scene components: {}", scene.components().len());
    let rc = trap_region(&scene)?;
    for m in [Mode::Ray, Mode::Line] {
        let comps = region_components(&scene, &rc, |l| l.is_trapped(m));
        println!("{m}-trapped components: {}", comps.len());
        for (i, c) in comps.iter().enumerate() {
            println!(
                "  #{i}: {} cells, area {}, hull area {}, convex {}",
                c.cells.len(),
                c.area,
                c.hull_area,
                c.convex
            );
        }
    }
    Ok(EXIT_OK)
}

fn certify(a: CertifyArgs) -> Result<u8> {
    let (scene, _) = load_planar(&a.scene)?;
    let y = point2(&a.point)?;
    let cert = match certify_trap_radius(&scene, &y, a.mode) {
        Ok(c) => c,
        Err(e @ wconvex::Error::NotTrapped(_)) => {
            println!("{e}");
            return Ok(EXIT_FAILED);
        }
        Err(e) => return Err(e.into()),
    };
    cert.verify(&scene)?;
    let witnesses: Vec<Value> = cert
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "center": pt_json(&w.center),
                "half_side": rat_json(&w.half_side),
                "polygon": w.poly,
                "arc": [w.arc.start.to_string(), w.arc.end.to_string()],
            })
        })
        .collect();
    let doc = json!({
        "center": pt_json(&cert.center),
        "mode": cert.mode,
        "eps1": rat_json(&cert.eps1),
        "eps": rat_json(&cert.eps),
        "level": cert.level,
        "witnesses": witnesses,
    });
    println!(
        "certified {} mode at {}: radius {} with {} squares",
        cert.mode,
        cert.center,
        cert.eps,
        cert.witnesses.len()
    );
    if let Some(p) = &a.out {
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        emit(Some(p), &text)?;
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let ids = if a.only.is_empty() {
        CRITERIA.to_vec()
    } else {
        a.only
    };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.contains(id)) {
        bail!("no criterion {bad}");
    }
    let report = run_selected(a.seed, &ids);
    if a.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(p) = &a.out {
        emit(Some(p), &report.to_json())?;
    }
    Ok(match report.status() {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAILED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn render(a: RenderArgs) -> Result<u8> {
    let (scene, _) = load_planar(&a.scene)?;
    let rc = trap_region(&scene)?;
    let style = SvgStyle {
        title: a.title,
        ..SvgStyle::default()
    };
    emit(a.out.as_deref(), &render_svg(&rc, &style))?;
    Ok(EXIT_OK)
}
