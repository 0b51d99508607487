//! Blocked directions, point classification and the derived regions.

mod certify;
mod escape;
mod region;

pub use certify::{certify_trap_radius, Certificate, Witness, MAX_REFINEMENT_LEVEL};
pub use escape::{
    boundary_samples, escape_ray_collection, weakly_convex, weakly_in_mode, weakly_semiconvex,
    EscapeReport, EscapeWitness,
};
pub use region::{
    region_components, symmetric_difference_area, trap_region, Facet, RegionCells, RegionComponent,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arcs::{Arc, ArcSet};
use crate::geom::{orient, ConvexPoly, Dir2, Line2, Location, Orientation, Point2, Ray2};
use crate::scene::{Membership, Scene2};

/// Whether escape is by a ray (semiconvexity, E^◇) or a full line
/// (convexity, E^△).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ray,
    Line,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ray => "ray",
            Mode::Line => "line",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    InE,
    OnBoundaryE,
    /// Every ray meets E.
    TrappedBoth,
    /// Every line meets E, but the witness ray misses it.
    TrappedLinesOnly {
        ray: Dir2,
    },
    /// The line through the point in this direction misses E.
    Free {
        line: Dir2,
    },
}

impl Classification {
    pub fn label(&self) -> Option<CellLabel> {
        match self {
            Classification::InE => Some(CellLabel::InE),
            Classification::OnBoundaryE => None,
            Classification::TrappedBoth => Some(CellLabel::TrappedBoth),
            Classification::TrappedLinesOnly { .. } => Some(CellLabel::TrappedLinesOnly),
            Classification::Free { .. } => Some(CellLabel::Free),
        }
    }

    pub fn is_trapped(&self, mode: Mode) -> bool {
        match mode {
            Mode::Ray => matches!(self, Classification::TrappedBoth),
            Mode::Line => matches!(
                self,
                Classification::TrappedBoth | Classification::TrappedLinesOnly { .. }
            ),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::InE => f.write_str("InE"),
            Classification::OnBoundaryE => f.write_str("OnBoundaryE"),
            Classification::TrappedBoth => f.write_str("TrappedBoth"),
            Classification::TrappedLinesOnly { ray } => write!(f, "TrappedLinesOnly {ray}"),
            Classification::Free { line } => write!(f, "Free {line}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellLabel {
    InE,
    TrappedBoth,
    TrappedLinesOnly,
    Free,
}

impl CellLabel {
    pub fn is_trapped(self, mode: Mode) -> bool {
        match mode {
            Mode::Ray => self == CellLabel::TrappedBoth,
            Mode::Line => matches!(self, CellLabel::TrappedBoth | CellLabel::TrappedLinesOnly),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellLabel::InE => "InE",
            CellLabel::TrappedBoth => "TrappedBoth",
            CellLabel::TrappedLinesOnly => "TrappedLinesOnly",
            CellLabel::Free => "Free",
        }
    }
}

/// Directions from `y` whose ray meets the open polygon `q`.
pub fn blocked_by_poly(q: &ConvexPoly, y: &Point2) -> ArcSet {
    let vs = q.vertices();
    let n = vs.len();
    match q.locate(y) {
        Location::Interior => ArcSet::Full,
        Location::Boundary => {
            if let Some(i) = vs.iter().position(|v| v == y) {
                let next = y.dir_to(&vs[(i + 1) % n]).expect("distinct vertices");
                let prev = y.dir_to(&vs[(i + n - 1) % n]).expect("distinct vertices");
                return ArcSet::from_arc(Arc::new(next, prev));
            }
            let (a, b) = q
                .edges()
                .find(|(a, b)| orient(a, b, y) == Orientation::Collinear)
                .expect("boundary point lies on an edge");
            let e = a.dir_to(b).expect("nondegenerate edge");
            let back = e.neg();
            ArcSet::from_arc(Arc::new(e, back))
        }
        Location::Outside => {
            // tangent vertices: every other vertex lies left of (resp. right
            // of) the ray from y through them
            let right = vs
                .iter()
                .find(|v| vs.iter().all(|w| orient(y, v, w) != Orientation::Clockwise))
                .expect("outside point has a right tangent");
            let left = vs
                .iter()
                .find(|v| {
                    vs.iter()
                        .all(|w| orient(y, v, w) != Orientation::CounterClockwise)
                })
                .expect("outside point has a left tangent");
            let start = y.dir_to(right).expect("y is not a vertex");
            let end = y.dir_to(left).expect("y is not a vertex");
            ArcSet::from_arc(Arc::new(start, end))
        }
    }
}

/// B(y): the union over polygons of the directions whose ray from `y`
/// meets that polygon.
pub fn blocked_arcs(s: &Scene2, y: &Point2) -> ArcSet {
    let mut arcs = Vec::new();
    for q in s.polys() {
        match blocked_by_poly(q, y) {
            ArcSet::Full => return ArcSet::Full,
            ArcSet::Partial(a) => arcs.extend(a),
        }
    }
    ArcSet::from_arcs(arcs)
}

/// Directions blocked in the given mode: B(y) for rays, B(y) ∪ −B(y) for
/// lines.
pub fn blocked_in_mode(s: &Scene2, y: &Point2, mode: Mode) -> ArcSet {
    let b = blocked_arcs(s, y);
    match mode {
        Mode::Ray => b,
        Mode::Line => b.antipodal_symmetrize(),
    }
}

pub fn classify_point(s: &Scene2, y: &Point2) -> Classification {
    match s.contains(y) {
        Membership::InE => return Classification::InE,
        Membership::OnBoundary => return Classification::OnBoundaryE,
        Membership::Outside => {}
    }
    let b = blocked_arcs(s, y);
    if b.is_full() {
        return Classification::TrappedBoth;
    }
    let sym = b.antipodal_symmetrize();
    if sym.is_full() {
        let ray = b.complement_representative().expect("not full");
        assert!(
            !s.ray_hits(&Ray2::new(y.clone(), ray.clone())),
            "escape ray {ray} from {y} hits the scene"
        );
        return Classification::TrappedLinesOnly { ray };
    }
    let line = sym.complement_representative().expect("not full");
    assert!(
        !s.line_hits(&Line2::new(y.clone(), line.clone())),
        "escape line {line} through {y} hits the scene"
    );
    Classification::Free { line }
}
