//! The verification suite: each check runs the exact kernels on the
//! example constructions and reports counts plus a counterexample on
//! failure. Reports carry no timings so that equal seeds give equal bytes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::{
    make_cut_scene_2d, make_e3_bounded, make_e3_stacked, make_en_product, random_cut_scene,
    zigzag_check, CutMode, CutScene, CutSceneSpec, E3Spec,
};
use crate::error::{Error, Result};
use crate::geom::{half, Point2, Scalar};
use crate::nd::{classify_point_nd, fmt_point, hull3, NdClassification, PointN, PrismScene};
use crate::sampling::{point_in_poly, rational_between, rng, SampleRng};
use crate::scene::Membership;
use crate::trap::{
    boundary_samples, certify_trap_radius, classify_point, escape_ray_collection,
    region_components, symmetric_difference_area, trap_region, weakly_convex, weakly_in_mode,
    weakly_semiconvex, Mode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub counts: BTreeMap<String, u64>,
    /// Exact values worth reading, as strings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CriterionResult {
    fn new(id: u32) -> Self {
        Self {
            id,
            name: criterion_name(id).to_string(),
            status: Status::Pass,
            counts: BTreeMap::new(),
            facts: BTreeMap::new(),
            counterexample: None,
        }
    }

    fn count(&mut self, key: &str, n: usize) {
        self.counts.insert(key.to_string(), n as u64);
    }

    fn bump(&mut self, key: &str) {
        *self.counts.entry(key.to_string()).or_default() += 1;
    }

    fn fact(&mut self, key: &str, v: impl fmt::Display) {
        self.facts.insert(key.to_string(), v.to_string());
    }

    /// Records the first failure; later ones only count.
    fn fail(&mut self, cx: impl Into<String>) {
        self.bump("failures");
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.counterexample = Some(cx.into());
        }
    }

    fn inconclusive(&mut self, why: impl Into<String>) {
        self.bump("inconclusive");
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
            self.counterexample = Some(why.into());
        }
    }

    fn check(&mut self, ok: bool, cx: impl FnOnce() -> String) {
        if !ok {
            self.fail(cx());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:>2} {}", self.status, self.id, self.name)?;
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if !counts.is_empty() {
            write!(f, " ({})", counts.join(", "))?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, "\n       counterexample: {cx}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl VerificationReport {
    pub fn status(&self) -> Status {
        if self.criteria.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self
            .criteria
            .iter()
            .any(|c| c.status == Status::Inconclusive)
        {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        let passed = self.criteria.iter().filter(|c| c.passed()).count();
        s.push_str(&format!(
            "{}: {passed}/{} criteria passed (seed {})\n",
            self.status(),
            self.criteria.len(),
            self.seed
        ));
        s
    }
}

pub const CRITERIA: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "lines-mode region equals P",
        2 => "rays-mode region equals P, three components",
        3 => "trapped sets are open",
        4 => "trapped region boundary escapes",
        5 => "region cells agree with direct classification",
        6 => "line-trapped components are convex",
        7 => "component lower bound and uncut control",
        8 => "bounded 3D trapped set",
        9 => "bounded 3D trapped set is non-convex and connected",
        10 => "stacked 3D floors trap within budget",
        11 => "four-dimensional product",
        _ => "unknown criterion",
    }
}

/// Runs one criterion. Kernel errors become failures carrying the message.
pub fn run_criterion(id: u32, seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new(id);
    // each criterion gets its own stream so subsets reproduce the full run
    let seed = seed.wrapping_mul(1_000_003).wrapping_add(u64::from(id));
    let out = match id {
        1 => region_equals_p(&mut r, CutMode::Lines),
        2 => region_equals_p(&mut r, CutMode::Rays),
        3 => openness(&mut r, seed),
        4 => boundary_escapes(&mut r),
        5 => oracle_agreement(&mut r, seed),
        6 => convex_components(&mut r, seed),
        7 => component_bound(&mut r, seed),
        8 => bounded_e3(&mut r, seed),
        9 => nonconvex_e3(&mut r),
        10 => stacked_e3(&mut r, seed),
        11 => product(&mut r, seed),
        _ => Err(Error::Parse(format!("no criterion {id}"))),
    };
    if let Err(e) = out {
        r.fail(format!("error: {e}"));
    }
    r
}

pub fn run_all(seed: u64) -> VerificationReport {
    run_selected(seed, &CRITERIA)
}

pub fn run_selected(seed: u64, ids: &[u32]) -> VerificationReport {
    VerificationReport {
        seed,
        criteria: ids.iter().map(|&id| run_criterion(id, seed)).collect(),
    }
}

fn standard_scene(mode: CutMode) -> Result<CutScene> {
    make_cut_scene_2d(&CutSceneSpec::standard(mode))
}

/// The standard scene in both modes plus five randomized cut scenes.
fn test_scenes(seed: u64) -> Result<Vec<(String, CutScene)>> {
    let mut out = vec![
        (
            "standard lines".to_string(),
            standard_scene(CutMode::Lines)?,
        ),
        ("standard rays".to_string(), standard_scene(CutMode::Rays)?),
    ];
    for i in 0..5u64 {
        let mode = if i % 2 == 0 {
            CutMode::Rays
        } else {
            CutMode::Lines
        };
        let s = seed.wrapping_add(i);
        out.push((
            format!("random {mode} seed {s}"),
            random_cut_scene(s, mode)?,
        ));
    }
    Ok(out)
}

fn region_equals_p(r: &mut CriterionResult, mode: CutMode) -> Result<()> {
    let cs = standard_scene(mode)?;
    let rc = trap_region(&cs.scene)?;
    let p = &cs.spec.p;
    r.count("cells", rc.cells.len());
    for m in [Mode::Line, Mode::Ray] {
        let diff = symmetric_difference_area(&rc, m, p);
        r.fact(&format!("symmetric_difference_{m}"), &diff);
        r.check(diff.is_zero(), || {
            format!("{m}-trapped region differs from P by area {diff}")
        });
        if !diff.is_zero() {
            let stray = rc
                .trapped_cells(m)
                .find(|(_, c)| c.poly.clip(p).map(|q| q.area()) != Some(c.poly.area()));
            if let Some((_, c)) = stray {
                r.fail(format!(
                    "{m}-trapped cell around {} leaves P",
                    c.poly.centroid()
                ));
            }
        }
    }
    if mode == CutMode::Rays {
        let comps = cs.scene.components().len();
        r.count("components", comps);
        r.check(comps == 3, || {
            format!("scene has {comps} components, expected 3")
        });
    }
    Ok(())
}

fn perimeter(c: &Point2, h: &Scalar) -> Vec<Point2> {
    let z = Scalar::zero();
    let steps = [-h.clone(), z, h.clone()];
    let mut out = Vec::with_capacity(8);
    for dx in &steps {
        for dy in &steps {
            if !(dx.is_zero() && dy.is_zero()) {
                out.push(c.offset(dx, dy));
            }
        }
    }
    out
}

fn openness(r: &mut CriterionResult, seed: u64) -> Result<()> {
    let cases = [(CutMode::Rays, Mode::Ray), (CutMode::Lines, Mode::Line)];
    for (k, (scene_mode, mode)) in cases.into_iter().enumerate() {
        let cs = standard_scene(scene_mode)?;
        let mut g = rng(seed.wrapping_add(k as u64));
        for _ in 0..100 {
            let y = point_in_poly(&mut g, &cs.spec.p);
            r.bump("points");
            let cert = match certify_trap_radius(&cs.scene, &y, mode) {
                Ok(c) => c,
                Err(e) => {
                    r.fail(format!("{mode} mode at {y}: {e}"));
                    continue;
                }
            };
            if let Err(e) = cert.verify(&cs.scene) {
                r.fail(format!("{mode} mode at {y}: {e}"));
                continue;
            }
            r.check(cert.eps.is_positive(), || {
                format!("{mode} mode at {y}: radius {}", cert.eps)
            });
            r.bump("certificates");
            for q in perimeter(&y, &(&cert.eps * half())) {
                r.bump("perimeter_samples");
                let c = classify_point(&cs.scene, &q);
                r.check(c.is_trapped(mode), || {
                    format!("{mode} mode: {q} at radius/2 from {y} is {c}")
                });
            }
        }
    }
    Ok(())
}

fn boundary_escapes(r: &mut CriterionResult) -> Result<()> {
    for scene_mode in [CutMode::Lines, CutMode::Rays] {
        let cs = standard_scene(scene_mode)?;
        let rc = trap_region(&cs.scene)?;
        for mode in [Mode::Ray, Mode::Line] {
            let samples = boundary_samples(&rc, mode, 50);
            r.check(samples.len() >= 50, || {
                format!(
                    "{scene_mode} scene, {mode} mode: only {} boundary samples",
                    samples.len()
                )
            });
            // E itself must have an escape at its own boundary points only
            // when it is weakly convex in this mode
            let strict = weakly_in_mode(&cs.scene, mode).0;
            let rep = escape_ray_collection(&cs.scene, &rc, mode, &samples)?;
            for w in &rep.witnesses {
                if w.misses_trapped && !w.misses_e {
                    r.bump("witnesses_missing_only_trapped");
                }
            }
            for w in rep
                .witnesses
                .iter()
                .filter(|w| !w.misses_trapped || (strict && !w.misses_e))
            {
                r.fail(format!(
                    "{scene_mode} scene, {mode} mode: escape from {} along {} (misses E: {}, misses trapped cells: {})",
                    w.sample, w.dir, w.misses_e, w.misses_trapped
                ));
            }
            r.count(&format!("samples_{scene_mode}_{mode}"), samples.len());
        }
    }
    Ok(())
}

fn oracle_agreement(r: &mut CriterionResult, seed: u64) -> Result<()> {
    for (k, scene_mode) in [CutMode::Lines, CutMode::Rays].into_iter().enumerate() {
        let cs = standard_scene(scene_mode)?;
        let rc = trap_region(&cs.scene)?;
        let b = &rc.bbox;
        let mut g = rng(seed.wrapping_add(k as u64));
        for _ in 0..1000 {
            let y = Point2::new(
                rational_between(&mut g, &b.min.x, &b.max.x),
                rational_between(&mut g, &b.min.y, &b.max.y),
            );
            let Some(cell) = rc.label_at(&y) else {
                r.bump("skeleton_points");
                continue;
            };
            let direct = classify_point(&cs.scene, &y);
            r.bump("agreements");
            r.check(direct.label() == Some(cell), || {
                format!(
                    "{scene_mode} scene: {y} is {direct} but its cell says {}",
                    cell.name()
                )
            });
        }
    }
    let agreed = r.counts.get("agreements").copied().unwrap_or(0);
    let failed = r.counts.get("failures").copied().unwrap_or(0);
    r.counts.insert("agreements".into(), agreed - failed);
    Ok(())
}

fn convex_components(r: &mut CriterionResult, seed: u64) -> Result<()> {
    for (name, cs) in test_scenes(seed)? {
        let rc = trap_region(&cs.scene)?;
        let comps = region_components(&cs.scene, &rc, |l| l.is_trapped(Mode::Line));
        r.bump("scenes");
        for c in comps {
            r.bump("components");
            r.check(c.convex, || {
                let p = rc.cells[c.cells[0]].poly.centroid();
                format!(
                    "{name}: component through {p} has area {} but hull area {}",
                    c.area, c.hull_area
                )
            });
        }
    }
    Ok(())
}

fn component_bound(r: &mut CriterionResult, seed: u64) -> Result<()> {
    for (name, cs) in test_scenes(seed)? {
        r.bump("scenes");
        let (ok, at) = weakly_semiconvex(&cs.scene);
        if !ok {
            r.fail(format!(
                "{name}: not weakly semiconvex at {}",
                at.map(|p| p.to_string()).unwrap_or_default()
            ));
            continue;
        }
        let rc = trap_region(&cs.scene)?;
        if rc.trapped_cells(Mode::Ray).next().is_none() {
            r.bump("without_trapped_points");
            continue;
        }
        let n = cs.scene.components().len();
        r.bump("checked");
        r.check(n >= 3, || format!("{name}: {n} components"));
    }
    let control = standard_scene(CutMode::None)?;
    match weakly_convex(&control.scene) {
        (false, Some(p)) => r.fact("control_counterexample", p),
        (false, None) => r.fail("uncut control failed without a boundary point"),
        (true, _) => r.fail("uncut control is weakly convex"),
    }
    Ok(())
}

/// Rejection sample outside E and the prediction with coordinate `axis`
/// restricted to the open interval (`lo`, `hi`).
fn outside_in_slab(
    s: &PrismScene,
    g: &mut SampleRng,
    axis: usize,
    lo: &Scalar,
    hi: &Scalar,
) -> Result<PointN> {
    let (blo, bhi) = s.sample_box()?;
    loop {
        let mut x: PointN = blo
            .iter()
            .zip(&bhi)
            .map(|(a, b)| rational_between(g, a, b))
            .collect();
        x[axis] = rational_between(g, lo, hi);
        if &x[axis] <= lo || &x[axis] >= hi {
            continue;
        }
        if s.contains(&x)? == Membership::Outside && s.predicted_locate(&x)? == Membership::Outside
        {
            return Ok(x);
        }
    }
}

/// Checks a classification of a predicted-trapped point.
fn expect_trapped(
    r: &mut CriterionResult,
    s: &PrismScene,
    y: &[Scalar],
    c: NdClassification,
    samples: usize,
) -> Result<usize> {
    let mut floors = 0;
    match c {
        NdClassification::EvidenceTrapped {
            samples: n,
            witnesses,
        } => {
            r.check(n == samples && witnesses.len() == samples, || {
                format!(
                    "{}: {} witnesses for {samples} directions",
                    fmt_point(y),
                    witnesses.len()
                )
            });
            for (d, w) in &witnesses {
                let inside = s.contains(&w.point)? == Membership::InE;
                r.check(inside, || {
                    format!(
                        "{}: witness {} for direction {} is not in E",
                        fmt_point(y),
                        fmt_point(&w.point),
                        fmt_point(d)
                    )
                });
                floors = floors.max(w.floors);
            }
            r.bump("evidence_trapped");
            r.counts
                .entry("direction_witnesses".into())
                .and_modify(|v| *v += witnesses.len() as u64)
                .or_insert(witnesses.len() as u64);
        }
        NdClassification::Inconclusive { reason } => {
            r.inconclusive(format!("{}: {reason}", fmt_point(y)));
        }
        other => r.fail(format!(
            "{} in the predicted trapped set is {other}",
            fmt_point(y)
        )),
    }
    Ok(floors)
}

fn expect_free(
    r: &mut CriterionResult,
    s: &PrismScene,
    y: &[Scalar],
    c: NdClassification,
) -> Result<()> {
    match c {
        NdClassification::CertifiedFree { line } => {
            let misses = s.line_misses(y, &line)?;
            r.check(misses, || {
                format!("{}: escape line {} meets E", fmt_point(y), fmt_point(&line))
            });
            r.bump("certified_free");
        }
        NdClassification::Inconclusive { reason } => {
            r.inconclusive(format!("{}: {reason}", fmt_point(y)));
        }
        other => r.fail(format!(
            "{} outside the prediction is {other}",
            fmt_point(y)
        )),
    }
    Ok(())
}

fn bounded_e3(r: &mut CriterionResult, seed: u64) -> Result<()> {
    let s = make_e3_bounded(&E3Spec::bounded_default())?;
    let PrismScene::E3(e) = &s else {
        unreachable!("bounded generator builds an E3 scene")
    };
    let rho = e.rho().clone();
    let mut g = rng(seed);
    for i in 0..200u64 {
        let y = s.sample_predicted(&mut g)?;
        let c = classify_point_nd(&s, &y, 256, seed.wrapping_add(i))?;
        expect_trapped(r, &s, &y, c, 256)?;
    }
    for i in 0..200u64 {
        let y = if i % 2 == 0 {
            outside_in_slab(&s, &mut g, 2, &-rho.clone(), &rho)?
        } else {
            s.sample_outside(&mut g)?
        };
        let c = classify_point_nd(&s, &y, 256, seed.wrapping_add(i))?;
        expect_free(r, &s, &y, c)?;
    }
    Ok(())
}

fn nonconvex_e3(r: &mut CriterionResult) -> Result<()> {
    let s = make_e3_bounded(&E3Spec::bounded_default())?;
    let PrismScene::E3(e) = &s else {
        unreachable!("bounded generator builds an E3 scene")
    };
    let (lower, upper) = (e.floor(0)?, e.floor(1)?);
    let mut pts = lower.p.vertices();
    pts.extend(upper.p.vertices());
    let hull = hull3(&pts)?;
    let union = lower.p.volume() + upper.p.volume();
    let expected = e.p().area() * e.rho() * Scalar::from_integer(2.into());
    r.fact("hull_volume", &hull.volume);
    r.fact("union_volume", &union);
    r.count("hull_facets", hull.facets.len());
    r.check(union == expected, || {
        format!("prisms over P have volume {union}, expected 2 area(P) rho = {expected}")
    });
    r.check(hull.volume > union, || {
        format!(
            "hull volume {} equals the union volume {union}",
            hull.volume
        )
    });
    // a hull point outside both prisms
    if hull.volume > union {
        let c = e.p().centroid();
        let probe = vec![c.x.clone() + e.rho(), c.y.clone(), Scalar::zero()];
        let in_hull = hull.cell().locate(&probe) == Membership::InE;
        let in_pred = s.predicted_locate(&probe)? != Membership::Outside;
        r.check(in_hull && !in_pred, || {
            format!(
                "probe {} does not separate hull and prisms",
                fmt_point(&probe)
            )
        });
        if in_hull && !in_pred {
            r.fact("hull_gap_point", fmt_point(&probe));
        }
    }
    let joined = e.p_prisms_share_base()?;
    r.check(joined, || {
        "the two prisms over P do not share an open base at z = 0".into()
    });
    Ok(())
}

fn stacked_e3(r: &mut CriterionResult, seed: u64) -> Result<()> {
    const BUDGET: usize = 8;
    let spec = E3Spec::stacked_default();
    let (ok, why) = zigzag_check(&spec.cut.p, &spec.axis);
    r.check(ok, || format!("zig-zag check failed: {why}"));
    let s = make_e3_stacked(&spec, BUDGET)?;
    let mut g = rng(seed);
    let mut max_floors = 0;
    for i in 0..100u64 {
        let y = s.sample_predicted(&mut g)?;
        let c = classify_point_nd(&s, &y, 128, seed.wrapping_add(i))?;
        max_floors = max_floors.max(expect_trapped(r, &s, &y, c, 128)?);
    }
    r.count("max_floors_entered", max_floors);
    r.check(max_floors <= BUDGET + 1, || {
        format!("a march entered {max_floors} floors")
    });
    Ok(())
}

fn product(r: &mut CriterionResult, seed: u64) -> Result<()> {
    let inner = make_e3_bounded(&E3Spec::bounded_default())?;
    let s = make_en_product(inner, 4)?;
    let one = Scalar::from_integer(1.into());
    let mut g = rng(seed);
    for i in 0..50u64 {
        let y = s.sample_predicted(&mut g)?;
        let c = classify_point_nd(&s, &y, 128, seed.wrapping_add(i))?;
        expect_trapped(r, &s, &y, c, 128)?;
    }
    for i in 0..50u64 {
        let y = if i % 2 == 0 {
            outside_in_slab(&s, &mut g, 3, &-one.clone(), &one)?
        } else {
            s.sample_outside(&mut g)?
        };
        let c = classify_point_nd(&s, &y, 128, seed.wrapping_add(i))?;
        expect_free(r, &s, &y, c)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_criteria_pass() {
        for id in [1, 2, 9] {
            let r = run_criterion(id, 7);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn failures_keep_the_first_counterexample() {
        let mut r = CriterionResult::new(1);
        r.fail("first");
        r.fail("second");
        r.inconclusive("later");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.counterexample.as_deref(), Some("first"));
        assert_eq!(r.counts["failures"], 2);
    }

    #[test]
    fn report_json_round_trips() {
        let rep = run_selected(3, &[1]);
        let back: VerificationReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        assert!(rep.to_text().starts_with("[PASS]  1"));
    }
}
