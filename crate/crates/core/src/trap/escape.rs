//! Escape witnesses on boundaries: weak convexity decisions for E and the
//! ray/line collections certifying the trapped region.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::{blocked_by_poly, blocked_in_mode, Mode, RegionCells};
use crate::arcs::ArcSet;
use crate::error::{Error, Result};
use crate::geom::{int, Dir2, Line2, Point2, Ray2, Scalar};
use crate::scene::Scene2;

/// Decides whether every boundary point of E admits an escape in `mode`.
/// Returns the first failing boundary point otherwise.
pub fn weakly_in_mode(s: &Scene2, mode: Mode) -> (bool, Option<Point2>) {
    let lines = s.candidate_lines();
    let mut seen: HashSet<Point2> = HashSet::new();
    for frag in s.boundary_fragments() {
        let mut pts = vec![frag.a.clone()];
        if !frag.is_point() {
            let ex = &frag.b.x - &frag.a.x;
            let ey = &frag.b.y - &frag.a.y;
            let mut ts: Vec<Scalar> = lines
                .iter()
                .filter_map(|l| l.crossing_param(&frag.a, &ex, &ey))
                .filter(|t| t.is_positive() && *t < Scalar::one())
                .collect();
            ts.push(Scalar::zero());
            ts.push(Scalar::one());
            ts.sort();
            ts.dedup();
            for w in ts.windows(2) {
                pts.push(frag.a.lerp(&frag.b, &w[1]));
                let mid = (&w[0] + &w[1]) / int(2);
                pts.push(frag.a.lerp(&frag.b, &mid));
            }
        }
        for p in pts {
            if !seen.insert(p.clone()) {
                continue;
            }
            if blocked_in_mode(s, &p, mode).is_full() {
                return (false, Some(p));
            }
        }
    }
    (true, None)
}

/// Every boundary point of E has a ray missing E.
pub fn weakly_semiconvex(s: &Scene2) -> (bool, Option<Point2>) {
    weakly_in_mode(s, Mode::Ray)
}

/// Every boundary point of E has a line missing E.
pub fn weakly_convex(s: &Scene2) -> (bool, Option<Point2>) {
    weakly_in_mode(s, Mode::Line)
}

/// Points on the boundary of the trapped region: midpoints of facets that
/// separate a trapped cell from a non-trapped one, topped up with evenly
/// spaced facet points until at least `min_count` are available.
pub fn boundary_samples(rc: &RegionCells, mode: Mode, min_count: usize) -> Vec<Point2> {
    let facets: Vec<_> = rc
        .facets()
        .into_iter()
        .filter(|f| rc.cells[f.a].label.is_trapped(mode) != rc.cells[f.b].label.is_trapped(mode))
        .collect();
    if facets.is_empty() {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut parts = 2i64;
    loop {
        for f in &facets {
            for k in (1..parts).step_by(if parts == 2 { 1 } else { 2 }) {
                let p = f.p.lerp(&f.q, &Scalar::new(k.into(), parts.into()));
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
        if out.len() >= min_count {
            return out;
        }
        parts *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeWitness {
    pub sample: Point2,
    pub dir: Dir2,
    pub misses_e: bool,
    pub misses_trapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeReport {
    pub mode: Mode,
    pub witnesses: Vec<EscapeWitness>,
}

impl EscapeReport {
    pub fn failures(&self) -> impl Iterator<Item = &EscapeWitness> {
        self.witnesses
            .iter()
            .filter(|w| !(w.misses_e && w.misses_trapped))
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// For each sample, an escape ray (line in line mode) checked exactly against
/// E and every trapped cell. The witness misses E whenever some direction
/// does.
pub fn escape_ray_collection(
    s: &Scene2,
    rc: &RegionCells,
    mode: Mode,
    samples: &[Point2],
) -> Result<EscapeReport> {
    let trapped: Vec<_> = rc.trapped_cells(mode).map(|(_, c)| &c.poly).collect();
    let mut witnesses = Vec::with_capacity(samples.len());
    for x in samples {
        // prefer a witness that misses E; where E itself has no escape at
        // x (x on the boundary of E), settle for one missing the trapped set
        let dir = match blocked_in_mode(s, x, mode).complement_representative() {
            Some(d) => d,
            None => {
                let sets: Vec<ArcSet> = trapped.iter().map(|c| blocked_by_poly(c, x)).collect();
                let mut b = ArcSet::union_all(&sets);
                if mode == Mode::Line {
                    b = b.antipodal_symmetrize();
                }
                b.complement_representative().ok_or_else(|| {
                    Error::Kernel(format!(
                        "boundary sample {x} of the trapped region is itself trapped"
                    ))
                })?
            }
        };
        let (misses_e, misses_trapped) = match mode {
            Mode::Ray => {
                let r = Ray2::new(x.clone(), dir.clone());
                (
                    !s.ray_hits(&r),
                    trapped.iter().all(|c| c.ray_chord(&r).is_none()),
                )
            }
            Mode::Line => {
                let l = Line2::new(x.clone(), dir.clone());
                (
                    !s.line_hits(&l),
                    trapped.iter().all(|c| c.line_chord(&l).is_none()),
                )
            }
        };
        witnesses.push(EscapeWitness {
            sample: x.clone(),
            dir,
            misses_e,
            misses_trapped,
        });
    }
    Ok(EscapeReport { mode, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPoly;
    use crate::scene::unit_square;

    #[test]
    fn convex_poly_is_weakly_convex() {
        let s = Scene2::new(vec![unit_square()]);
        assert_eq!(weakly_semiconvex(&s), (true, None));
        assert_eq!(weakly_convex(&s), (true, None));
    }

    #[test]
    fn square_annulus_is_not_weakly_convex() {
        // inner boundary points of a closed ring of bars see E in every
        // direction
        let p = Point2::from_ints;
        let s = Scene2::new(vec![
            ConvexPoly::new(vec![p(-3, 2), p(3, 2), p(3, 3), p(-3, 3)]).unwrap(),
            ConvexPoly::new(vec![p(-3, -3), p(3, -3), p(3, -2), p(-3, -2)]).unwrap(),
            ConvexPoly::new(vec![p(2, -3), p(3, -3), p(3, 3), p(2, 3)]).unwrap(),
            ConvexPoly::new(vec![p(-3, -3), p(-2, -3), p(-2, 3), p(-3, 3)]).unwrap(),
        ]);
        let (ok, witness) = weakly_convex(&s);
        assert!(!ok);
        let w = witness.unwrap();
        assert!(blocked_in_mode(&s, &w, Mode::Line).is_full());
        assert!(!weakly_semiconvex(&s).0);
    }
}
