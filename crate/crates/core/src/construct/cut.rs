//! Convex-set-minus-polygon scenes with ray or line cuts along the polygon
//! sides.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    convex_hull, int, orient, ratio, ConvexPoly, Dir2, Line2, LineEq, Location, Orientation,
    Point2, Ray2, Scalar,
};
use crate::sampling::{rational_between, rng, SampleRng};
use crate::scene::{Membership, Scene2};
use crate::trap::{weakly_convex, weakly_semiconvex};

/// Which parts of the polygon side lines are removed from `D \ closure(P)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutMode {
    /// One ray per side, starting at the side's head vertex and pointing
    /// along the side (cyclic orientation).
    Rays,
    /// Every side line in full.
    Lines,
    /// Nothing: the uncut control set.
    None,
}

impl fmt::Display for CutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutMode::Rays => "rays",
            CutMode::Lines => "lines",
            CutMode::None => "none",
        })
    }
}

impl FromStr for CutMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rays" | "ray" => Ok(CutMode::Rays),
            "lines" | "line" => Ok(CutMode::Lines),
            "none" | "uncut" => Ok(CutMode::None),
            other => Err(Error::Parse(format!("unknown cut mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSceneSpec {
    pub d: ConvexPoly,
    pub p: ConvexPoly,
    pub mode: CutMode,
    /// Initial relative width of the glue diamonds.
    pub glue: Scalar,
}

impl CutSceneSpec {
    /// D = (-4,4)², P = triangle (0,2), (-2,-1), (2,-1).
    pub fn standard(mode: CutMode) -> Self {
        let p = Point2::from_ints;
        Self {
            d: ConvexPoly::new(vec![p(-4, -4), p(4, -4), p(4, 4), p(-4, 4)]).expect("square"),
            p: ConvexPoly::new(vec![p(0, 2), p(-2, -1), p(2, -1)]).expect("triangle"),
            mode,
            glue: ratio(1, 4),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Removed {
    Ray(Ray2),
    Line(Line2),
}

impl Removed {
    pub fn contains(&self, x: &Point2) -> bool {
        let (o, d) = match self {
            Removed::Ray(r) => (&r.origin, &r.dir),
            Removed::Line(l) => (&l.origin, &l.dir),
        };
        let tip = o.along(d, &Scalar::one());
        if orient(o, &tip, x) != Orientation::Collinear {
            return false;
        }
        match self {
            Removed::Line(_) => true,
            Removed::Ray(_) => {
                let (dx, dy) = x.minus(o);
                !(dx * d.dx() + dy * d.dy()).is_negative()
            }
        }
    }

    fn crosses(&self, q: &ConvexPoly) -> bool {
        match self {
            Removed::Ray(r) => q.ray_chord(r).is_some(),
            Removed::Line(l) => q.line_chord(l).is_some(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CutScene {
    pub spec: CutSceneSpec,
    pub scene: Scene2,
    /// Convex pieces of `D \ P` cut by the side lines.
    pub chunks: usize,
    pub removed: Vec<Removed>,
    /// Relative diamond width actually used.
    pub glue_used: Option<Scalar>,
}

impl CutScene {
    /// Direct set-formula membership: in D, outside closure(P), off every
    /// removed ray or line.
    pub fn oracle_contains(&self, x: &Point2) -> bool {
        self.spec.d.locate(x) == Location::Interior
            && self.spec.p.locate(x) == Location::Outside
            && !self.removed.iter().any(|r| r.contains(x))
    }

    /// The predicted trapped set: P, except for the uncut control where the
    /// prediction does not apply.
    pub fn predicted(&self) -> Option<&ConvexPoly> {
        (self.spec.mode != CutMode::None).then_some(&self.spec.p)
    }
}

const GLUE_FLOOR_BITS: u32 = 40;
const COVER_SAMPLES: usize = 2000;

/// Builds an overlapping convex cover of `(D \ closure(P))` minus the cuts,
/// validated against the direct membership formula.
pub fn make_cut_scene_2d(spec: &CutSceneSpec) -> Result<CutScene> {
    let built = build_cover(spec)?;
    validate_cover(&built, 0x5eed_c0de)?;
    let area = built.scene.union_area();
    let expected = spec.d.area() - spec.p.area();
    if area != expected {
        return Err(Error::InvalidConstruction(format!(
            "cover area {area} differs from area(D) - area(P) = {expected}"
        )));
    }
    let (ok, bad) = match spec.mode {
        CutMode::Rays => weakly_semiconvex(&built.scene),
        CutMode::Lines => weakly_convex(&built.scene),
        CutMode::None => (true, None),
    };
    if !ok {
        return Err(Error::InvalidConstruction(format!(
            "{} scene is not weakly convex at {}",
            spec.mode,
            bad.expect("failing point")
        )));
    }
    Ok(built)
}

fn build_cover(spec: &CutSceneSpec) -> Result<CutScene> {
    let (d, p) = (&spec.d, &spec.p);
    if !p
        .vertices()
        .iter()
        .all(|v| d.locate(v) == Location::Interior)
    {
        return Err(Error::InvalidConstruction(
            "closure(P) is not strictly inside D".into(),
        ));
    }
    if !spec.glue.is_positive() {
        return Err(Error::InvalidConstruction(
            "glue thinness must be positive".into(),
        ));
    }
    let n = p.len();
    let vs = p.vertices();
    let sides: Vec<LineEq> = (0..n)
        .map(|i| LineEq::through(&vs[i], &vs[(i + 1) % n]).expect("distinct vertices"))
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if let Some(x) = sides[i].intersection(&sides[j]) {
                if d.locate(&x) != Location::Outside {
                    return Err(Error::InvalidConstruction(format!(
                        "side lines {i} and {j} of P meet at {x} inside closure(D)"
                    )));
                }
            }
        }
    }

    let mut chunks = vec![d.clone()];
    for line in &sides {
        let mut next = Vec::new();
        for c in chunks {
            match c.split(line) {
                (Some(a), Some(b)) => {
                    next.push(a);
                    next.push(b);
                }
                (Some(a), None) | (None, Some(a)) => next.push(a),
                (None, None) => unreachable!("chunks have positive area"),
            }
        }
        chunks = next;
    }
    chunks.retain(|c| p.locate(&c.centroid()) != Location::Interior);
    let chunk_count = chunks.len();

    let edge_dir = |i: usize| vs[i].dir_to(&vs[(i + 1) % n]).expect("distinct vertices");
    let removed: Vec<Removed> = match spec.mode {
        CutMode::Rays => (0..n)
            .map(|i| Removed::Ray(Ray2::new(vs[(i + 1) % n].clone(), edge_dir(i))))
            .collect(),
        CutMode::Lines => (0..n)
            .map(|i| Removed::Line(Line2::new(vs[i].clone(), edge_dir(i))))
            .collect(),
        CutMode::None => Vec::new(),
    };
    // kept outer segments of the side lines, from a vertex of P out to ∂D
    let mut kept: Vec<(Point2, Point2)> = Vec::new();
    let exit = |from: &Point2, dir: &Dir2| {
        let (_, hi) = d
            .chord(from, &dir.dx(), &dir.dy())
            .expect("vertex inside D");
        from.along(dir, &hi)
    };
    for i in 0..n {
        let e = edge_dir(i);
        let tail = &vs[i];
        let head = &vs[(i + 1) % n];
        match spec.mode {
            CutMode::Rays => kept.push((tail.clone(), exit(tail, &e.neg()))),
            CutMode::Lines => {}
            CutMode::None => {
                kept.push((tail.clone(), exit(tail, &e.neg())));
                kept.push((head.clone(), exit(head, &e)));
            }
        }
    }

    let mut polys = chunks;
    let mut glue_used = None;
    if !kept.is_empty() {
        let mut delta = spec.glue.clone();
        let floor = Scalar::new(1.into(), num_bigint::BigInt::from(1u64) << GLUE_FLOOR_BITS);
        let diamonds = loop {
            let ds: Option<Vec<ConvexPoly>> = kept
                .iter()
                .map(|(a, b)| diamond(a, b, &delta).filter(|q| glue_is_valid(q, d, p, &removed)))
                .collect();
            if let Some(ds) = ds {
                break ds;
            }
            delta *= ratio(1, 2);
            if delta < floor {
                return Err(Error::InvalidConstruction(
                    "glue diamonds cannot be made thin enough".into(),
                ));
            }
        };
        polys.extend(diamonds);
        glue_used = Some(delta);
    }
    Ok(CutScene {
        spec: spec.clone(),
        scene: Scene2::new(polys),
        chunks: chunk_count,
        removed,
        glue_used,
    })
}

/// Rhombus with diagonal `a..b` and the other diagonal of length
/// `2 * delta * |b - a|`.
fn diamond(a: &Point2, b: &Point2, delta: &Scalar) -> Option<ConvexPoly> {
    let m = a.midpoint(b);
    let (ex, ey) = b.minus(a);
    let (nx, ny) = (-ey * delta, ex * delta);
    let right = m.offset(&-nx.clone(), &-ny.clone());
    let left = m.offset(&nx, &ny);
    ConvexPoly::new(vec![a.clone(), right, b.clone(), left]).ok()
}

fn glue_is_valid(q: &ConvexPoly, d: &ConvexPoly, p: &ConvexPoly, removed: &[Removed]) -> bool {
    q.vertices()
        .iter()
        .all(|v| d.locate(v) != Location::Outside)
        && !crate::geom::polys_interiors_intersect(q, p)
        && !removed.iter().any(|r| r.crosses(q))
}

fn validate_cover(c: &CutScene, seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let b = c.spec.d.bbox().with_margin(&ratio(1, 8));
    for _ in 0..COVER_SAMPLES {
        let x = Point2::new(
            rational_between(&mut r, &b.min.x, &b.max.x),
            rational_between(&mut r, &b.min.y, &b.max.y),
        );
        let direct = c.oracle_contains(&x);
        let cover = c.scene.contains(&x) == Membership::InE;
        if direct != cover {
            return Err(Error::InvalidConstruction(format!(
                "cover disagrees with the set formula at {x}: formula {direct}, cover {cover}"
            )));
        }
    }
    // the cut lines themselves are measure zero; probe them directly
    for rem in &c.removed {
        let (o, dir) = match rem {
            Removed::Ray(r) => (&r.origin, &r.dir),
            Removed::Line(l) => (&l.origin, &l.dir),
        };
        for k in [1i64, 3, 7] {
            let x = o.along(dir, &ratio(k, 16));
            if c.scene.contains(&x) == Membership::InE {
                return Err(Error::InvalidConstruction(format!(
                    "removed point {x} is covered"
                )));
            }
        }
    }
    Ok(())
}

/// A random convex D (hull of random points) with a random triangle P
/// strictly inside, cut in the given mode.
pub fn random_cut_scene(seed: u64, mode: CutMode) -> Result<CutScene> {
    let mut r = rng(seed);
    let d = loop {
        let pts: Vec<Point2> = (0..8).map(|_| small_point(&mut r, 8)).collect();
        if let Ok(h) = convex_hull(&pts) {
            if h.area() >= int(40) {
                break h;
            }
        }
    };
    let c = d.centroid();
    let p = loop {
        let pts: Vec<Point2> = (0..3)
            .map(|_| {
                let o = small_point(&mut r, 2);
                c.offset(&o.x, &o.y)
            })
            .collect();
        let Ok(t) = convex_hull(&pts) else { continue };
        if t.len() == 3
            && t.area() >= int(1)
            && t.vertices()
                .iter()
                .all(|v| d.locate(v) == Location::Interior)
        {
            break t;
        }
    };
    make_cut_scene_2d(&CutSceneSpec {
        d,
        p,
        mode,
        glue: ratio(1, 4),
    })
}

/// Point with coordinates in `[-r, r]` on a grid of step 1/4.
fn small_point(rng: &mut SampleRng, r: i64) -> Point2 {
    let snap = |v: Scalar| (v * int(4)).round() / int(4);
    Point2::new(
        snap(rational_between(rng, &int(-r), &int(r))),
        snap(rational_between(rng, &int(-r), &int(r))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_lines_scene_has_six_components() {
        let c = make_cut_scene_2d(&CutSceneSpec::standard(CutMode::Lines)).unwrap();
        assert_eq!(c.chunks, 6);
        assert_eq!(c.scene.polys().len(), 6);
        assert_eq!(c.scene.components().len(), 6);
    }

    #[test]
    fn default_rays_scene_has_three_components() {
        let c = make_cut_scene_2d(&CutSceneSpec::standard(CutMode::Rays)).unwrap();
        assert_eq!(c.scene.polys().len(), 9);
        assert_eq!(c.scene.components().len(), 3);
        // a point on a removed ray is not covered, a point on a kept
        // segment is
        assert_ne!(c.scene.contains(&Point2::from_ints(3, -1)), Membership::InE);
        assert_eq!(
            c.scene.contains(&Point2::from_ints(-3, -1)),
            Membership::InE
        );
    }

    #[test]
    fn uncut_control_is_connected() {
        let c = make_cut_scene_2d(&CutSceneSpec::standard(CutMode::None)).unwrap();
        assert_eq!(c.scene.components().len(), 1);
        assert!(c.predicted().is_none());
    }

    #[test]
    fn p_must_be_inside_d() {
        let mut spec = CutSceneSpec::standard(CutMode::Lines);
        spec.p = spec.p.translate(&int(3), &int(0));
        assert!(matches!(
            make_cut_scene_2d(&spec),
            Err(Error::InvalidConstruction(_))
        ));
    }

    #[test]
    fn modes_parse() {
        assert_eq!("rays".parse::<CutMode>().unwrap(), CutMode::Rays);
        assert_eq!("line".parse::<CutMode>().unwrap(), CutMode::Lines);
        assert!("zigzag".parse::<CutMode>().is_err());
    }
}
