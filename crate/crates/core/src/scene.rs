//! The open planar set E as a finite union of open convex polygons.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geom::{ratio, Aabb, ConvexPoly, Line2, LineEq, Location, Point2, Ray2, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    InE,
    OnBoundary,
    Outside,
}

/// Closed piece of a polygon edge lying on ∂E. `a == b` marks an isolated
/// boundary point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFragment {
    pub poly: usize,
    pub edge: usize,
    pub a: Point2,
    pub b: Point2,
}

impl BoundaryFragment {
    pub fn is_point(&self) -> bool {
        self.a == self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene2 {
    polys: Vec<ConvexPoly>,
    bbox: Aabb,
}

impl Scene2 {
    pub fn new(polys: Vec<ConvexPoly>) -> Self {
        let bbox = match Aabb::from_points(polys.iter().flat_map(|p| p.vertices())) {
            Some(b) => b.with_margin(&ratio(1, 4)),
            None => Aabb::new(Point2::from_ints(-1, -1), Point2::from_ints(1, 1)),
        };
        Self { polys, bbox }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn polys(&self) -> &[ConvexPoly] {
        &self.polys
    }

    pub fn bbox(&self) -> &Aabb {
        &self.bbox
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn translate(&self, dx: &Scalar, dy: &Scalar) -> Scene2 {
        Scene2::new(self.polys.iter().map(|p| p.translate(dx, dy)).collect())
    }

    pub fn contains(&self, p: &Point2) -> Membership {
        let mut on_boundary = false;
        for q in &self.polys {
            match q.locate(p) {
                Location::Interior => return Membership::InE,
                Location::Boundary => on_boundary = true,
                Location::Outside => {}
            }
        }
        if on_boundary {
            Membership::OnBoundary
        } else {
            Membership::Outside
        }
    }

    pub fn ray_hits(&self, r: &Ray2) -> bool {
        self.polys.iter().any(|q| q.ray_chord(r).is_some())
    }

    pub fn line_hits(&self, l: &Line2) -> bool {
        self.polys.iter().any(|q| q.line_chord(l).is_some())
    }

    /// Components of the open union, as sorted lists of polygon indices,
    /// ordered by their smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.polys.len();
        let mut uf = UnionFind::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if uf.find(i) != uf.find(j)
                    && crate::geom::polys_interiors_intersect(&self.polys[i], &self.polys[j])
                {
                    uf.union(i, j);
                }
            }
        }
        uf.groups()
    }

    /// The parts of polygon edges not covered by the interior of any other
    /// polygon.
    pub fn boundary_fragments(&self) -> Vec<BoundaryFragment> {
        let mut out = Vec::new();
        for (pi, q) in self.polys.iter().enumerate() {
            for ei in 0..q.len() {
                let (v, w) = q.edge(ei);
                let ex = &w.x - &v.x;
                let ey = &w.y - &v.y;
                let mut cover: Vec<(Scalar, Scalar)> = self
                    .polys
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != pi)
                    .filter_map(|(_, o)| o.chord(v, &ex, &ey))
                    .filter(|(lo, hi)| hi.is_positive() && *lo < Scalar::one())
                    .collect();
                cover.sort();
                for (t0, t1) in uncovered_pieces(&cover) {
                    out.push(BoundaryFragment {
                        poly: pi,
                        edge: ei,
                        a: v.lerp(w, &t0),
                        b: v.lerp(w, &t1),
                    });
                }
            }
        }
        out
    }

    /// Edge-supporting lines first, then every line through two distinct
    /// vertices; duplicates removed, first occurrence kept.
    pub fn candidate_lines(&self) -> Vec<LineEq> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for q in &self.polys {
            for (a, b) in q.edges() {
                let l = LineEq::through(a, b).expect("polygon edges are nondegenerate");
                if seen.insert(l.clone()) {
                    out.push(l);
                }
            }
        }
        let mut verts: Vec<&Point2> = Vec::new();
        let mut vseen = HashSet::new();
        for v in self.polys.iter().flat_map(|q| q.vertices()) {
            if vseen.insert(v) {
                verts.push(v);
            }
        }
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                let l = LineEq::through(verts[i], verts[j]).expect("distinct vertices");
                if seen.insert(l.clone()) {
                    out.push(l);
                }
            }
        }
        out
    }

    /// Every scene vertex, deduplicated, in first-seen order.
    pub fn vertices(&self) -> Vec<Point2> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in self.polys.iter().flat_map(|q| q.vertices()) {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Exact area of the union, by inclusion of disjoint clipped pieces.
    pub fn union_area(&self) -> Scalar {
        let mut pieces: Vec<ConvexPoly> = Vec::new();
        for q in &self.polys {
            // q minus everything already accounted for, as convex fragments
            let mut frags = vec![q.clone()];
            for prev in &pieces {
                let mut next = Vec::new();
                for f in frags {
                    next.extend(subtract_convex(&f, prev));
                }
                frags = next;
            }
            pieces.extend(frags);
        }
        pieces
            .iter()
            .map(ConvexPoly::area)
            .fold(Scalar::zero(), |a, b| a + b)
    }
}

/// `[0, 1]` minus a union of open intervals sorted by left end.
fn uncovered_pieces(cover: &[(Scalar, Scalar)]) -> Vec<(Scalar, Scalar)> {
    let mut out = Vec::new();
    let mut cur = Scalar::zero();
    let one = Scalar::one();
    for (lo, hi) in cover {
        if *lo >= cur {
            out.push((cur.clone(), lo.clone()));
        }
        if *hi > cur {
            cur = hi.clone();
        }
        if cur > one {
            return out;
        }
    }
    out.push((cur, one));
    out
}

/// `a` minus the closure of `b`, as convex polygons with disjoint interiors.
pub fn subtract_convex(a: &ConvexPoly, b: &ConvexPoly) -> Vec<ConvexPoly> {
    if !crate::geom::polys_interiors_intersect(a, b) {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    let mut rest = a.clone();
    for (p, q) in b.edges() {
        let (inside, outside) = rest.split_by(|x| crate::geom::cross3(p, q, x));
        if let Some(o) = outside {
            out.push(o);
        }
        match inside {
            Some(i) => rest = i,
            None => return out,
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

/// Union-find over arbitrary indices, exposed for region components.
pub(crate) fn group_by_links(
    n: usize,
    links: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for (a, b) in links {
        uf.union(a, b);
    }
    uf.groups()
}

/// The unit square `[0,1]²`; handy in tests and examples.
pub fn unit_square() -> ConvexPoly {
    ConvexPoly::new(vec![
        Point2::from_ints(0, 0),
        Point2::from_ints(1, 0),
        Point2::from_ints(1, 1),
        Point2::from_ints(0, 1),
    ])
    .expect("unit square")
}

/// Axis-aligned square with centre `c` and half-side `s`.
pub fn square(c: &Point2, s: &Scalar) -> ConvexPoly {
    ConvexPoly::new(vec![
        c.offset(&-s.clone(), &-s.clone()),
        c.offset(s, &-s.clone()),
        c.offset(s, s),
        c.offset(&-s.clone(), s),
    ])
    .expect("square with positive half-side")
}
