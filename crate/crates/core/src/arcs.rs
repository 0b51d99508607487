//! Open arcs on the circle of directions.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::geom::{raw_angle_cmp, Dir2};

/// Open arc swept counterclockwise from `start` to `end`. When `start == end`
/// the arc is the whole circle minus that one direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: Dir2,
    pub end: Dir2,
}

impl Arc {
    pub fn new(start: Dir2, end: Dir2) -> Self {
        Self { start, end }
    }

    pub fn is_punctured_circle(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, d: &Dir2) -> bool {
        if *d == self.start {
            return false;
        }
        if self.is_punctured_circle() {
            return true;
        }
        let rd = d.relative_to(&self.start);
        let re = self.end.relative_to(&self.start);
        raw_angle_cmp(&rd, &re) == Ordering::Less
    }

    /// `d` lies in `[start, end)`.
    fn contains_from_start(&self, d: &Dir2) -> bool {
        *d == self.start || self.contains(d)
    }

    pub fn neg(&self) -> Arc {
        Arc::new(self.start.neg(), self.end.neg())
    }

    /// True when the arc is shorter than a half turn.
    pub fn is_minor(&self) -> bool {
        self.start.cross(&self.end).is_positive()
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -> {})", self.start, self.end)
    }
}

/// A component of the complement of an [`ArcSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gap {
    Point(Dir2),
    /// Closed arc from `from` counterclockwise to `to`.
    Closed {
        from: Dir2,
        to: Dir2,
    },
    Circle,
}

/// Normalized union of open arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArcSet {
    Full,
    /// Pairwise disjoint arcs sorted by start. Arcs may share an endpoint,
    /// which is then an uncovered direction.
    Partial(Vec<Arc>),
}

impl Default for ArcSet {
    fn default() -> Self {
        ArcSet::empty()
    }
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::Partial(Vec::new())
    }

    pub fn from_arc(arc: Arc) -> Self {
        ArcSet::Partial(vec![arc])
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = Arc>) -> Self {
        normalize(arcs.into_iter().collect())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, ArcSet::Full)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ArcSet::Partial(a) if a.is_empty())
    }

    pub fn arcs(&self) -> &[Arc] {
        match self {
            ArcSet::Full => &[],
            ArcSet::Partial(a) => a,
        }
    }

    pub fn contains(&self, d: &Dir2) -> bool {
        match self {
            ArcSet::Full => true,
            ArcSet::Partial(arcs) => arcs.iter().any(|a| a.contains(d)),
        }
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        match (self, other) {
            (ArcSet::Full, _) | (_, ArcSet::Full) => ArcSet::Full,
            (ArcSet::Partial(a), ArcSet::Partial(b)) => {
                if a.is_empty() {
                    return other.clone();
                }
                if b.is_empty() {
                    return self.clone();
                }
                normalize(a.iter().chain(b).cloned().collect())
            }
        }
    }

    pub fn insert(&mut self, arc: Arc) {
        if let ArcSet::Partial(arcs) = self {
            let mut all = std::mem::take(arcs);
            all.push(arc);
            *self = normalize(all);
        }
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> ArcSet {
        let mut arcs = Vec::new();
        for s in sets {
            match s {
                ArcSet::Full => return ArcSet::Full,
                ArcSet::Partial(a) => arcs.extend(a.iter().cloned()),
            }
        }
        normalize(arcs)
    }

    /// `self ∪ (−self)`.
    pub fn antipodal_symmetrize(&self) -> ArcSet {
        match self {
            ArcSet::Full => ArcSet::Full,
            ArcSet::Partial(arcs) => normalize(
                arcs.iter()
                    .cloned()
                    .chain(arcs.iter().map(Arc::neg))
                    .collect(),
            ),
        }
    }

    pub fn complement_components(&self) -> Vec<Gap> {
        match self {
            ArcSet::Full => Vec::new(),
            ArcSet::Partial(arcs) if arcs.is_empty() => vec![Gap::Circle],
            ArcSet::Partial(arcs) => {
                let n = arcs.len();
                (0..n)
                    .map(|i| {
                        let from = arcs[i].end.clone();
                        let to = arcs[(i + 1) % n].start.clone();
                        if from == to {
                            Gap::Point(from)
                        } else {
                            Gap::Closed { from, to }
                        }
                    })
                    .collect()
            }
        }
    }

    /// A direction outside the set, preferring axis and diagonal directions.
    pub fn complement_representative(&self) -> Option<Dir2> {
        if self.is_full() {
            return None;
        }
        for (x, y) in PREFERRED {
            let d = Dir2::from_ints(x, y);
            if !self.contains(&d) {
                return Some(d);
            }
        }
        self.complement_components()
            .into_iter()
            .next()
            .map(|gap| match gap {
                Gap::Point(d) => d,
                Gap::Closed { from, to } => closed_arc_interior_point(&from, &to).unwrap_or(from),
                Gap::Circle => Dir2::from_ints(1, 0),
            })
    }
}

const PREFERRED: [(i64, i64); 8] = [
    (1, 0),
    (0, 1),
    (-1, 0),
    (0, -1),
    (1, 1),
    (-1, 1),
    (-1, -1),
    (1, -1),
];

/// A direction strictly inside the counterclockwise arc from `u` to `v`
/// when that arc is shorter than a half turn.
pub fn closed_arc_interior_point(u: &Dir2, v: &Dir2) -> Option<Dir2> {
    if u.cross(v).is_positive() {
        u.sum(v)
    } else {
        None
    }
}

/// Normalizes an arbitrary list of open arcs into canonical form.
fn normalize(arcs: Vec<Arc>) -> ArcSet {
    if arcs.is_empty() {
        return ArcSet::empty();
    }
    let mut bps: Vec<Dir2> = arcs
        .iter()
        .flat_map(|a| [a.start.clone(), a.end.clone()])
        .collect();
    bps.sort();
    bps.dedup();
    let m = bps.len();
    // element 2i is the point bps[i], element 2i+1 the open gap after it
    let mut covered = vec![false; 2 * m];
    for i in 0..m {
        covered[2 * i] = arcs.iter().any(|a| a.contains(&bps[i]));
        covered[2 * i + 1] = arcs.iter().any(|a| a.contains_from_start(&bps[i]));
    }
    let Some(first_gap) = covered.iter().position(|c| !c) else {
        return ArcSet::Full;
    };
    let total = 2 * m;
    let mut out = Vec::new();
    let mut k = 0;
    while k < total {
        let idx = (first_gap + k) % total;
        if !covered[idx] {
            k += 1;
            continue;
        }
        // runs always start on a gap element
        debug_assert!(idx % 2 == 1);
        let start = idx / 2;
        let mut len = 0;
        while k + len < total && covered[(first_gap + k + len) % total] {
            len += 1;
        }
        let last = (first_gap + k + len - 1) % total;
        debug_assert!(last % 2 == 1);
        let end = (last / 2 + 1) % m;
        out.push(Arc::new(bps[start].clone(), bps[end].clone()));
        k += len;
    }
    out.sort_by(|a, b| a.start.cmp(&b.start));
    ArcSet::Partial(out)
}

/// Serializable view of an arc, directions as integer pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub start: [String; 2],
    pub end: [String; 2],
}

impl From<&Arc> for ArcRecord {
    fn from(a: &Arc) -> Self {
        let pair = |d: &Dir2| [d.dx_int().to_string(), d.dy_int().to_string()];
        ArcRecord {
            start: pair(&a.start),
            end: pair(&a.end),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: i64, y: i64) -> Dir2 {
        Dir2::from_ints(x, y)
    }

    fn arc(a: (i64, i64), b: (i64, i64)) -> Arc {
        Arc::new(d(a.0, a.1), d(b.0, b.1))
    }

    #[test]
    fn halves_leave_two_points() {
        let upper = ArcSet::from_arc(arc((1, 0), (-1, 0)));
        let lower = ArcSet::from_arc(arc((-1, 0), (1, 0)));
        let u = upper.union(&lower);
        assert!(!u.is_full());
        assert!(!u.contains(&d(1, 0)));
        assert!(!u.contains(&d(-1, 0)));
        assert!(u.contains(&d(0, 1)) && u.contains(&d(3, -1)));
        assert_eq!(
            u.complement_components(),
            vec![Gap::Point(d(-1, 0)), Gap::Point(d(1, 0))]
        );
    }

    #[test]
    fn three_arcs_leave_one_point_then_full() {
        let s = ArcSet::from_arcs([
            arc((1, 0), (-1, 0)),
            arc((0, 1), (0, -1)),
            arc((-1, 0), (1, 0)),
        ]);
        assert_eq!(s.complement_components(), vec![Gap::Point(d(1, 0))]);
        assert_eq!(s.complement_representative(), Some(d(1, 0)));
        let full = s.union(&ArcSet::from_arc(arc((1, -1), (1, 1))));
        assert!(full.is_full());
    }

    #[test]
    fn full_checks() {
        assert!(ArcSet::Full.is_full());
        let punctured = ArcSet::from_arc(arc((1, 0), (1, 0)));
        assert!(!punctured.is_full());
        assert!(!punctured.contains(&d(1, 0)));
        assert!(punctured.contains(&d(1, -1)));
        assert!(!ArcSet::empty().is_full());
    }

    #[test]
    fn representatives() {
        let upper = ArcSet::from_arc(arc((1, 0), (-1, 0)));
        let r = upper.complement_representative().unwrap();
        assert!(!upper.contains(&r));
        assert_eq!(r, d(1, 0));
        assert_eq!(ArcSet::Full.complement_representative(), None);
        assert_eq!(ArcSet::empty().complement_representative(), Some(d(1, 0)));
        // complement is a thin closed arc away from all preferred directions
        let s = ArcSet::from_arc(arc((3, -1), (2, -1)));
        let r = s.complement_representative().unwrap();
        assert!(!s.contains(&r));
        assert_eq!(r, d(5, -2));
    }

    #[test]
    fn symmetrize_examples() {
        let upper = ArcSet::from_arc(arc((1, 0), (-1, 0)));
        let s = upper.antipodal_symmetrize();
        assert_eq!(
            s,
            ArcSet::Partial(vec![arc((1, 0), (-1, 0)), arc((-1, 0), (1, 0))])
        );
        assert!(ArcSet::Full.antipodal_symmetrize().is_full());
        let q = ArcSet::from_arc(arc((1, 0), (0, 1))).antipodal_symmetrize();
        assert_eq!(
            q,
            ArcSet::Partial(vec![arc((1, 0), (0, 1)), arc((-1, 0), (0, -1))])
        );
    }

    #[test]
    fn overlapping_arcs_merge() {
        let s = ArcSet::from_arcs([arc((1, 0), (-1, 1)), arc((0, 1), (-1, -1))]);
        assert_eq!(s, ArcSet::Partial(vec![arc((1, 0), (-1, -1))]));
        // covering the shared endpoint merges touching arcs
        let s = ArcSet::from_arcs([
            arc((1, 0), (0, 1)),
            arc((0, 1), (-1, 0)),
            arc((1, 1), (-1, 1)),
        ]);
        assert_eq!(s, ArcSet::Partial(vec![arc((1, 0), (-1, 0))]));
    }

    #[test]
    fn wrap_around_arc() {
        let s = ArcSet::from_arc(arc((0, -1), (0, 1)));
        assert!(s.contains(&d(1, 0)));
        assert!(!s.contains(&d(-1, 0)));
        let t = s.union(&ArcSet::from_arc(arc((-1, 1), (-1, -1))));
        assert!(!t.is_full());
        assert_eq!(t.arcs().len(), 2);
    }
}
