//! Constructive openness certificate for trapped points.

use num_traits::{One, Signed, Zero};

use super::{blocked_by_poly, classify_point, Mode};
use crate::arcs::{Arc, ArcSet, Gap};
use crate::error::{Error, Result};
use crate::geom::{half, ratio, Dir2, Point2, Ray2, Scalar};
use crate::sampling::square_lattice_direction;
use crate::scene::{square, Membership, Scene2};

/// Refinement levels tried before giving up; level `L` samples `64 * 2^L`
/// directions.
pub const MAX_REFINEMENT_LEVEL: u32 = 10;

/// Rounds of gap-endpoint sampling per level.
const ENDPOINT_ROUNDS: usize = 6;

/// An open axis-aligned square inside polygon `poly` together with the arc
/// of directions from the certified point that it blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub center: Point2,
    pub half_side: Scalar,
    pub poly: usize,
    pub arc: Arc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub center: Point2,
    pub mode: Mode,
    /// ℓ∞ distance from the center to the closure of E.
    pub eps1: Scalar,
    pub eps: Scalar,
    pub witnesses: Vec<Witness>,
    /// Refinement level at which coverage was reached.
    pub level: u32,
}

impl Certificate {
    fn covered(&self) -> ArcSet {
        let arcs = self.witnesses.iter().flat_map(|w| match self.mode {
            Mode::Ray => vec![w.arc.clone()],
            Mode::Line => vec![w.arc.clone(), w.arc.neg()],
        });
        ArcSet::from_arcs(arcs)
    }

    /// Re-checks every claim exactly against the scene.
    pub fn verify(&self, s: &Scene2) -> Result<()> {
        let fail = |m: String| {
            Err(Error::Kernel(format!(
                "certificate at {}: {m}",
                self.center
            )))
        };
        if !self.eps.is_positive() || self.eps > self.eps1 {
            return fail(format!("bad radius {} (eps1 {})", self.eps, self.eps1));
        }
        let d = s
            .polys()
            .iter()
            .map(|q| q.linf_distance(&self.center))
            .min()
            .unwrap_or_else(Scalar::zero);
        if d != self.eps1 {
            return fail(format!("eps1 {} but distance {}", self.eps1, d));
        }
        for w in &self.witnesses {
            let Some(q) = s.polys().get(w.poly) else {
                return fail(format!("unknown polygon {}", w.poly));
            };
            if q.linf_clearance(&w.center) < &w.half_side + &self.eps {
                return fail(format!("square at {} too close to the boundary", w.center));
            }
            let arc = blocked_by_poly(&square(&w.center, &w.half_side), &self.center);
            if arc != ArcSet::from_arc(w.arc.clone()) {
                return fail(format!("arc of square at {} does not match", w.center));
            }
        }
        if !self.covered().is_full() {
            return fail("witness arcs do not cover the circle".into());
        }
        Ok(())
    }
}

/// Builds finitely many squares inside E whose blocked arcs cover every
/// direction from `y` (every direction or its opposite in line mode), and
/// the radius within which every point stays trapped.
pub fn certify_trap_radius(s: &Scene2, y: &Point2, mode: Mode) -> Result<Certificate> {
    if s.contains(y) != Membership::Outside {
        return Err(Error::NotTrapped(format!("{y} lies in the closure of E")));
    }
    let c = classify_point(s, y);
    if !c.is_trapped(mode) {
        return Err(Error::NotTrapped(format!("{y} is {c} in {mode} mode")));
    }
    let eps1 = s
        .polys()
        .iter()
        .map(|q| q.linf_distance(y))
        .min()
        .expect("trapped point implies a nonempty scene");

    let mut witnesses: Vec<Witness> = Vec::new();
    let mut covered = ArcSet::empty();
    let add = |d: &Dir2, witnesses: &mut Vec<Witness>, covered: &mut ArcSet| -> Result<()> {
        if covered.contains(d) {
            return Ok(());
        }
        let w = match place_square(s, y, d) {
            Some(w) => w,
            None if mode == Mode::Line => place_square(s, y, &d.neg())
                .ok_or_else(|| Error::Kernel(format!("line through {y} along {d} misses E")))?,
            None => return Err(Error::Kernel(format!("ray from {y} along {d} misses E"))),
        };
        let mut arcs = vec![w.arc.clone()];
        if mode == Mode::Line {
            arcs.push(w.arc.neg());
        }
        *covered = covered.union(&ArcSet::from_arcs(arcs));
        witnesses.push(w);
        Ok(())
    };

    for level in 0..=MAX_REFINEMENT_LEVEL {
        let n = 64u64 << level;
        for i in 0..n {
            if level > 0 && i % 2 == 0 {
                continue;
            }
            let d = square_lattice_direction(i, n);
            add(&d, &mut witnesses, &mut covered)?;
        }
        for _ in 0..ENDPOINT_ROUNDS {
            if covered.is_full() {
                break;
            }
            for gap in covered.complement_components() {
                match gap {
                    Gap::Point(d) => add(&d, &mut witnesses, &mut covered)?,
                    Gap::Closed { from, to } => {
                        add(&from, &mut witnesses, &mut covered)?;
                        add(&to, &mut witnesses, &mut covered)?;
                    }
                    Gap::Circle => {}
                }
            }
        }
        if covered.is_full() {
            let eps = witnesses
                .iter()
                .map(|w| w.half_side.clone())
                .fold(eps1.clone(), |a, b| a.min(b));
            return Ok(Certificate {
                eps: pow2_floor(&eps),
                center: y.clone(),
                mode,
                eps1,
                witnesses,
                level,
            });
        }
    }
    Err(Error::NonTermination(format!(
        "{} witnesses at {y} after {MAX_REFINEMENT_LEVEL} levels, gaps remain: {:?}",
        witnesses.len(),
        covered.complement_components().len()
    )))
}

/// The largest power of two not above the positive `x`. Any smaller radius
/// is still certified and keeps later arithmetic cheap.
fn pow2_floor(x: &Scalar) -> Scalar {
    let two = Scalar::from_integer(2.into());
    let mut p = Scalar::one();
    while &p > x {
        p /= &two;
    }
    while &(&p * &two) <= x {
        p *= &two;
    }
    p
}

/// Square blocking the ray from `y` along `d`: near the midpoint of the
/// chord with the largest clearance, a power of two in size and at most a
/// third of that clearance.
fn place_square(s: &Scene2, y: &Point2, d: &Dir2) -> Option<Witness> {
    let ray = Ray2::new(y.clone(), d.clone());
    let mut best: Option<(Scalar, Point2, usize)> = None;
    for (i, q) in s.polys().iter().enumerate() {
        let Some((lo, hi)) = q.ray_chord(&ray) else {
            continue;
        };
        let mid = y.along(d, &((lo + hi) * half()));
        let clearance = q.linf_clearance(&mid);
        if best.as_ref().is_none_or(|(c, _, _)| &clearance > c) {
            best = Some((clearance, mid, i));
        }
    }
    let (clearance, mid, poly) = best?;
    // snap to a dyadic grid so sizes do not compound from one gap endpoint
    // to the next; the shift is at most an eighth of a side, so `mid` stays inside
    let half_side = pow2_floor(&(clearance / Scalar::from_integer(3.into())));
    let step = &half_side * ratio(1, 4);
    let snap = |v: &Scalar| (v / &step).round() * &step;
    let center = Point2::new(snap(&mid.x), snap(&mid.y));
    let arc = match blocked_by_poly(&square(&center, &half_side), y) {
        ArcSet::Partial(mut a) if a.len() == 1 => a.remove(0),
        other => panic!("square seen from outside blocks a single arc, got {other:?}"),
    };
    Some(Witness {
        center,
        half_side,
        poly,
        arc,
    })
}
