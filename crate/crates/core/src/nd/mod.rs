//! Classification in dimension three and up over prism scenes.

mod cell;
mod e3;
mod hull;
mod prism;
mod product;

pub use cell::{along, dot, fmt_point, Bound, ConvexCell, HalfSpace, Interval, PointN};
pub use e3::{Cap, E3Scene, E3Variant, Floor};
pub use hull::{hull3, Hull3};
pub use prism::{Prism, TRange};
pub(crate) use product::check_dimension;
pub use product::{Layer, ProductScene};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geom::{int, ConvexPoly, Point2, Scalar};
use crate::sampling::{rational_between, rng, SampleRng};
use crate::scene::{Membership, Scene2};
use crate::trap::{classify_point, Classification};

/// Solids listed explicitly, with no prediction attached.
#[derive(Clone, Debug)]
pub struct PrismList {
    pub prisms: Vec<Prism>,
    cells: Vec<ConvexCell>,
}

impl PrismList {
    pub fn new(prisms: Vec<Prism>) -> Self {
        PrismList {
            cells: prisms.iter().map(Prism::cell).collect(),
            prisms,
        }
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum PrismScene {
    E3(E3Scene),
    Product(ProductScene),
    Prisms(PrismList),
}

/// Horizontal cross-section of a three-dimensional scene.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Slice {
    Empty,
    Convex(ConvexPoly),
    General(Scene2),
}

impl Slice {
    fn from_polys(polys: Vec<ConvexPoly>) -> Slice {
        match polys.len() {
            0 => Slice::Empty,
            1 => Slice::Convex(polys.into_iter().next().expect("one polygon")),
            _ => Slice::General(Scene2::new(polys)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Slice::Empty => "empty",
            Slice::Convex(_) => "convex",
            Slice::General(_) => "general",
        }
    }
}

/// How a blocking point was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Route {
    /// The ray enters a cap.
    Cap,
    /// The ray leaves a prism over P through a lateral face on this floor.
    Lateral { floor: usize },
    /// Intersection with every solid.
    Direct,
}

/// A point of E on the ray `y + param * dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWitness {
    pub param: Scalar,
    pub point: PointN,
    pub route: Route,
    /// Floors entered by the march.
    pub floors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NdClassification {
    InE,
    OnBoundary,
    /// The line through the point along this direction misses every solid.
    CertifiedFree {
        line: PointN,
    },
    /// The ray from the point misses every solid, but no escape line was
    /// found.
    CertifiedRayEscape {
        ray: PointN,
    },
    /// Every sampled direction is blocked, each by a verified point of E.
    EvidenceTrapped {
        samples: usize,
        witnesses: Vec<(PointN, BlockWitness)>,
    },
    Inconclusive {
        reason: String,
    },
}

impl NdClassification {
    pub fn name(&self) -> &'static str {
        match self {
            NdClassification::InE => "InE",
            NdClassification::OnBoundary => "OnBoundary",
            NdClassification::CertifiedFree { .. } => "CertifiedFree",
            NdClassification::CertifiedRayEscape { .. } => "CertifiedRayEscape",
            NdClassification::EvidenceTrapped { .. } => "EvidenceTrapped",
            NdClassification::Inconclusive { .. } => "Inconclusive",
        }
    }
}

impl fmt::Display for NdClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NdClassification::CertifiedFree { line } => {
                write!(f, "CertifiedFree {}", fmt_point(line))
            }
            NdClassification::CertifiedRayEscape { ray } => {
                write!(f, "CertifiedRayEscape {}", fmt_point(ray))
            }
            NdClassification::EvidenceTrapped { samples, .. } => {
                write!(f, "EvidenceTrapped({samples})")
            }
            NdClassification::Inconclusive { reason } => write!(f, "Inconclusive: {reason}"),
            other => f.write_str(other.name()),
        }
    }
}

impl PrismScene {
    pub fn dim(&self) -> usize {
        match self {
            PrismScene::E3(_) | PrismScene::Prisms(_) => 3,
            PrismScene::Product(p) => p.n,
        }
    }

    fn check_point(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Parse(format!(
                "point has {} coordinates, scene has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Scalar]) -> Result<Membership> {
        self.check_point(x)?;
        match self {
            PrismScene::E3(e) => e.contains(x),
            PrismScene::Product(p) => p.contains(x),
            PrismScene::Prisms(l) => {
                let mut boundary = false;
                for c in &l.cells {
                    match c.locate(x) {
                        Membership::InE => return Ok(Membership::InE),
                        Membership::OnBoundary => boundary = true,
                        Membership::Outside => {}
                    }
                }
                Ok(if boundary {
                    Membership::OnBoundary
                } else {
                    Membership::Outside
                })
            }
        }
    }

    /// Location relative to the construction's predicted trapped set.
    pub fn predicted_locate(&self, x: &[Scalar]) -> Result<Membership> {
        self.check_point(x)?;
        match self {
            PrismScene::E3(e) => e.predicted_locate(x),
            PrismScene::Product(p) => p.predicted_locate(x),
            PrismScene::Prisms(_) => Ok(Membership::Outside),
        }
    }

    pub fn has_prediction(&self) -> bool {
        !matches!(self, PrismScene::Prisms(_))
    }

    /// Every solid as a cell; only for bounded scenes.
    pub fn solid_cells(&self) -> Result<Vec<ConvexCell>> {
        match self {
            PrismScene::E3(e) if e.variant == E3Variant::Stacked => Err(
                Error::InvalidConstruction("the stacked scene has infinitely many solids".into()),
            ),
            PrismScene::E3(e) => {
                let mut out: Vec<ConvexCell> = e.caps.iter().map(|c| c.prism.cell()).collect();
                for k in 0..2 {
                    out.extend(e.floor(k)?.pieces.iter().map(Prism::cell));
                }
                Ok(out)
            }
            PrismScene::Product(p) => p.solid_cells(),
            PrismScene::Prisms(l) => Ok(l.cells.clone()),
        }
    }

    /// Open convex hull of a bounded scene.
    pub fn hull_cell(&self) -> Result<ConvexCell> {
        match self {
            PrismScene::E3(e) => Ok(hull3(&e.hull_points()?)?.cell()),
            PrismScene::Product(p) => Ok(p.hull.times_interval(
                &Scalar::new((-3).into(), 2.into()),
                &Scalar::new(3.into(), 2.into()),
            )),
            PrismScene::Prisms(l) => {
                let pts: Vec<PointN> = l.prisms.iter().flat_map(Prism::vertices).collect();
                Ok(hull3(&pts)?.cell())
            }
        }
    }

    /// Cross-section at height `z` of a three-dimensional scene.
    pub fn horizontal_slice(&self, z: &Scalar) -> Result<Slice> {
        match self {
            PrismScene::E3(e) => {
                let (mut pieces, caps) = e.slice_polys(z)?;
                pieces.extend(caps);
                Ok(Slice::from_polys(pieces))
            }
            PrismScene::Prisms(l) => Ok(Slice::from_polys(
                l.prisms.iter().filter_map(|q| q.slice(z)).collect(),
            )),
            PrismScene::Product(_) => Err(Error::InvalidConstruction(
                "horizontal slices are three-dimensional; products slice along the last axis"
                    .into(),
            )),
        }
    }

    /// Whether the full line misses every solid.
    pub fn line_misses(&self, origin: &[Scalar], dir: &[Scalar]) -> Result<bool> {
        match self {
            PrismScene::E3(e) => e.line_misses(origin, dir),
            _ => Ok(self
                .solid_cells()?
                .iter()
                .all(|c| c.chord(origin, dir).is_empty())),
        }
    }

    /// Escape line through `y` found within a cross-section; verified
    /// against every solid before it is returned.
    pub fn escape_via_slice(&self, y: &[Scalar]) -> Result<Option<PointN>> {
        self.check_point(y)?;
        if self.contains(y)? != Membership::Outside {
            return Err(Error::Degenerate(format!(
                "{} lies in the closure of E",
                fmt_point(y)
            )));
        }
        let line = match self {
            PrismScene::Product(p) => p.escape_via_slice(y)?,
            _ => {
                let shadow = Point2::new(y[0].clone(), y[1].clone());
                let dir = match self.horizontal_slice(&y[2])? {
                    Slice::Empty => Some((int(1), int(0))),
                    Slice::Convex(q) => free_direction(&Scene2::new(vec![q]), &shadow),
                    Slice::General(s) => free_direction(&s, &shadow),
                };
                dir.map(|(dx, dy)| vec![dx, dy, Scalar::zero()])
            }
        };
        if let Some(d) = &line {
            if !self.line_misses(y, d)? {
                return Err(Error::Kernel(format!(
                    "slice escape line {} through {} meets E",
                    fmt_point(d),
                    fmt_point(y)
                )));
            }
        }
        Ok(line)
    }

    /// A point of E on the ray from `y` along `a`, `None` when the ray
    /// misses every solid.
    pub fn blocked_witness(&self, y: &[Scalar], a: &[Scalar]) -> Result<Option<BlockWitness>> {
        self.check_point(y)?;
        self.check_point(a)?;
        if a.iter().all(Zero::is_zero) {
            return Err(Error::Degenerate("zero direction".into()));
        }
        match self {
            PrismScene::E3(e) => e.blocked_witness(y, a),
            PrismScene::Product(p) => p.blocked_witness(y, a),
            PrismScene::Prisms(_) => {
                let s = self
                    .solid_cells()?
                    .iter()
                    .filter_map(|c| c.chord(y, a).ray_part().sample())
                    .min();
                Ok(s.map(|s| BlockWitness {
                    point: along(y, a, &s),
                    param: s,
                    route: Route::Direct,
                    floors: 0,
                }))
            }
        }
    }

    /// A random point of the predicted trapped set.
    pub fn sample_predicted(&self, rng: &mut SampleRng) -> Result<PointN> {
        match self {
            PrismScene::E3(e) => {
                let k = match e.variant {
                    E3Variant::Bounded => rng.gen_range(0..2),
                    E3Variant::Stacked => 0,
                };
                e.sample_in_p_floor(rng, k)
            }
            PrismScene::Product(p) => {
                let mut x = p.inner.sample_predicted(rng)?;
                x.push(open_unit(rng));
                Ok(x)
            }
            PrismScene::Prisms(_) => Err(Error::InvalidConstruction(
                "explicit prism lists carry no prediction".into(),
            )),
        }
    }

    /// A box around a bounded scene, padded on every side.
    pub fn sample_box(&self) -> Result<(PointN, PointN)> {
        match self {
            PrismScene::E3(e) => e.sample_box(),
            PrismScene::Product(p) => {
                let (mut lo, mut hi) = p.inner.sample_box()?;
                lo.push(int(-2));
                hi.push(int(2));
                Ok((lo, hi))
            }
            PrismScene::Prisms(l) => {
                let pts: Vec<PointN> = l.prisms.iter().flat_map(Prism::vertices).collect();
                let lo = (0..3)
                    .map(|c| pts.iter().map(|p| &p[c]).min().expect("vertex").clone() - int(1));
                let hi = (0..3)
                    .map(|c| pts.iter().map(|p| &p[c]).max().expect("vertex").clone() + int(1));
                Ok((lo.collect(), hi.collect()))
            }
        }
    }

    /// A random point outside the closure of both E and the prediction.
    pub fn sample_outside(&self, rng: &mut SampleRng) -> Result<PointN> {
        let (lo, hi) = self.sample_box()?;
        loop {
            let x: PointN = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| rational_between(rng, a, b))
                .collect();
            if self.contains(&x)? == Membership::Outside
                && self.predicted_locate(&x)? == Membership::Outside
            {
                return Ok(x);
            }
        }
    }
}

fn open_unit(rng: &mut SampleRng) -> Scalar {
    loop {
        let w = rational_between(rng, &int(-1), &int(1));
        if w.abs() < int(1) {
            return w;
        }
    }
}

fn free_direction(s: &Scene2, y: &Point2) -> Option<(Scalar, Scalar)> {
    match classify_point(s, y) {
        Classification::Free { line } => Some((line.dx(), line.dy())),
        _ => None,
    }
}

/// `count` integer directions in ℝⁿ: the 2n coordinate directions first,
/// then random vectors cycling through the orthants.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<PointN> {
    let mut out = Vec::with_capacity(count);
    for i in 0..n {
        for sign in [1, -1] {
            let mut d = vec![Scalar::zero(); n];
            d[i] = int(sign);
            out.push(d);
        }
    }
    out.truncate(count);
    let mut r = rng(seed);
    let orthants = 1usize << n;
    let mut o = 0usize;
    while out.len() < count {
        let d: PointN = (0..n)
            .map(|i| {
                let m: i64 = r.gen_range(1..=64);
                let sign = if (o >> i) & 1 == 1 { -1 } else { 1 };
                Scalar::from_integer(BigInt::from(sign * m))
            })
            .collect();
        out.push(d);
        o = (o + 1) % orthants;
    }
    out
}

/// Exact membership, then an escape line from a cross-section, then a
/// blocking witness for each of `samples` directions. A direction without
/// a witness has a ray that misses every solid.
pub fn classify_point_nd(
    s: &PrismScene,
    y: &[Scalar],
    samples: usize,
    seed: u64,
) -> Result<NdClassification> {
    let budget = |e: Error| match e {
        Error::BudgetExhausted { budget } => Ok(NdClassification::Inconclusive {
            reason: format!("floor budget {budget} exhausted"),
        }),
        other => Err(other),
    };
    match s.contains(y) {
        Ok(Membership::InE) => return Ok(NdClassification::InE),
        Ok(Membership::OnBoundary) => return Ok(NdClassification::OnBoundary),
        Ok(Membership::Outside) => {}
        Err(e) => return budget(e),
    }
    match s.escape_via_slice(y) {
        Ok(Some(line)) => return Ok(NdClassification::CertifiedFree { line }),
        Ok(None) => {}
        Err(e) => return budget(e),
    }
    let mut witnesses = Vec::with_capacity(samples);
    for d in sample_directions(s.dim(), samples, seed) {
        match s.blocked_witness(y, &d) {
            Ok(Some(w)) => {
                if s.contains(&w.point)? != Membership::InE {
                    return Err(Error::Kernel(format!(
                        "witness {} for direction {} is not in E",
                        fmt_point(&w.point),
                        fmt_point(&d)
                    )));
                }
                witnesses.push((d, w));
            }
            Ok(None) => return Ok(NdClassification::CertifiedRayEscape { ray: d }),
            Err(e) => return budget(e),
        }
    }
    Ok(NdClassification::EvidenceTrapped { samples, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_start_with_axes() {
        let ds = sample_directions(3, 20, 7);
        assert_eq!(ds.len(), 20);
        assert_eq!(ds[0], vec![int(1), int(0), int(0)]);
        assert_eq!(ds[5], vec![int(0), int(0), int(-1)]);
        assert!(ds.iter().all(|d| d.iter().any(|c| !c.is_zero())));
        assert_eq!(ds, sample_directions(3, 20, 7));
        // the random part visits every orthant
        let signs: std::collections::BTreeSet<Vec<bool>> = ds[6..]
            .iter()
            .map(|d| d.iter().map(Signed::is_negative).collect())
            .collect();
        assert_eq!(signs.len(), 8);
    }
}
