//! Exact decomposition of the bounding box into label-constant open cells.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{classify_point, CellLabel, Mode};
use crate::error::{Error, Result};
use crate::geom::{convex_hull, int, Aabb, ConvexPoly, LineEq, Location, Point2, Scalar};
use crate::scene::{group_by_links, Scene2};

/// Cell index, edge parameters along the line, and the edge endpoints.
type EdgeSpan = (usize, Scalar, Scalar, Point2, Point2);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub poly: ConvexPoly,
    pub label: CellLabel,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(usize),
    Split {
        line: LineEq,
        pos: Box<Node>,
        neg: Box<Node>,
    },
}

/// Leaf cells of a binary space partition of the scene's bounding box.
#[derive(Clone, Debug)]
pub struct RegionCells {
    pub bbox: Aabb,
    pub cells: Vec<Cell>,
    root: Node,
}

/// A positive-length segment shared by the closures of two cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub a: usize,
    pub b: usize,
    pub p: Point2,
    pub q: Point2,
}

impl Facet {
    pub fn midpoint(&self) -> Point2 {
        self.p.midpoint(&self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionComponent {
    pub cells: Vec<usize>,
    pub area: Scalar,
    pub hull_area: Scalar,
    pub convex: bool,
}

impl RegionCells {
    /// The cell containing `p`, or `None` when `p` lies on the skeleton or
    /// outside the box.
    pub fn locate(&self, p: &Point2) -> Option<usize> {
        if !self.bbox.contains_strict(p) {
            return None;
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(i) => {
                    return (self.cells[*i].poly.locate(p) == Location::Interior).then_some(*i)
                }
                Node::Split { line, pos, neg } => {
                    let v = line.eval(p);
                    if v.is_zero() {
                        return None;
                    }
                    node = if v.is_positive() { pos } else { neg };
                }
            }
        }
    }

    pub fn label_at(&self, p: &Point2) -> Option<CellLabel> {
        self.locate(p).map(|i| self.cells[i].label)
    }

    pub fn area_with(&self, pred: impl Fn(CellLabel) -> bool) -> Scalar {
        self.cells
            .iter()
            .filter(|c| pred(c.label))
            .map(|c| c.poly.area())
            .fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn trapped_cells(&self, mode: Mode) -> impl Iterator<Item = (usize, &Cell)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.label.is_trapped(mode))
    }

    /// All positive-length facets shared by two cells, in deterministic
    /// order.
    pub fn facets(&self) -> Vec<Facet> {
        let mut by_line: BTreeMap<LineEq, Vec<EdgeSpan>> = BTreeMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for (u, v) in cell.poly.edges() {
                let line = LineEq::through(u, v).expect("nondegenerate edge");
                let key = |p: &Point2| {
                    if line.b.is_zero() {
                        p.y.clone()
                    } else {
                        p.x.clone()
                    }
                };
                let (ku, kv) = (key(u), key(v));
                let entry = if ku < kv {
                    (ci, ku, kv, u.clone(), v.clone())
                } else {
                    (ci, kv, ku, v.clone(), u.clone())
                };
                by_line.entry(line).or_default().push(entry);
            }
        }
        let mut out = Vec::new();
        for (_, segs) in by_line {
            for i in 0..segs.len() {
                for j in (i + 1)..segs.len() {
                    let (a, alo, ahi, ap, aq) = &segs[i];
                    let (b, blo, bhi, bp, bq) = &segs[j];
                    if a == b {
                        continue;
                    }
                    let (p, lo) = if alo >= blo { (ap, alo) } else { (bp, blo) };
                    let (q, hi) = if ahi <= bhi { (aq, ahi) } else { (bq, bhi) };
                    if lo < hi {
                        out.push(Facet {
                            a: *a.min(b),
                            b: *a.max(b),
                            p: p.clone(),
                            q: q.clone(),
                        });
                    }
                }
            }
        }
        out.sort_by(|x, y| (x.a, x.b).cmp(&(y.a, y.b)).then_with(|| x.p.cmp(&y.p)));
        out
    }
}

struct Builder<'a> {
    scene: &'a Scene2,
    lines: Vec<LineEq>,
    hull: Option<ConvexPoly>,
    cells: Vec<Cell>,
}

impl Builder<'_> {
    fn build(&mut self, cell: ConvexPoly, active: Vec<usize>) -> Result<Node> {
        if let Some(label) = self.shortcut(&cell) {
            return Ok(self.leaf(cell, label));
        }
        let mut it = active.into_iter();
        let split = it.by_ref().find(|&i| cell.crossed_by(&self.lines[i]));
        let Some(li) = split else {
            let c = cell.centroid();
            let label = classify_point(self.scene, &c).label().ok_or_else(|| {
                Error::Kernel(format!("open cell centroid {c} lies on the scene boundary"))
            })?;
            return Ok(self.leaf(cell, label));
        };
        let rest: Vec<usize> = it.collect();
        let line = self.lines[li].clone();
        let (pos, neg) = cell.split(&line);
        let (pos, neg) = (pos.expect("crossed"), neg.expect("crossed"));
        let pos_active = rest
            .iter()
            .copied()
            .filter(|&i| pos.crossed_by(&self.lines[i]))
            .collect();
        let neg_active = rest
            .into_iter()
            .filter(|&i| neg.crossed_by(&self.lines[i]))
            .collect();
        let pos_node = self.build(pos, pos_active)?;
        let neg_node = self.build(neg, neg_active)?;
        Ok(Node::Split {
            line,
            pos: Box::new(pos_node),
            neg: Box::new(neg_node),
        })
    }

    /// Labels that follow without splitting further: a cell inside one
    /// polygon is in E, and a cell missing the hull of E is free.
    fn shortcut(&self, cell: &ConvexPoly) -> Option<CellLabel> {
        if self.scene.polys().iter().any(|q| q.contains_poly(cell)) {
            return Some(CellLabel::InE);
        }
        match &self.hull {
            Some(h) if !crate::geom::polys_interiors_intersect(h, cell) => Some(CellLabel::Free),
            _ => None,
        }
    }

    fn leaf(&mut self, poly: ConvexPoly, label: CellLabel) -> Node {
        self.cells.push(Cell { poly, label });
        Node::Leaf(self.cells.len() - 1)
    }
}

/// Splits the bounding box by every candidate line (only where needed) and
/// labels each open leaf cell.
pub fn trap_region(s: &Scene2) -> Result<RegionCells> {
    let lines = s.candidate_lines();
    let hull = convex_hull(&s.vertices()).ok();
    let bbox = s.bbox().clone();
    let mut b = Builder {
        scene: s,
        lines,
        hull,
        cells: Vec::new(),
    };
    let root_poly = bbox.to_poly();
    let active = (0..b.lines.len()).collect();
    let root = b.build(root_poly, active)?;
    Ok(RegionCells {
        bbox,
        cells: b.cells,
        root,
    })
}

/// Connected components of the cells whose label satisfies `pred`. Two
/// cells connect when they share a facet whose midpoint satisfies it too.
pub fn region_components(
    s: &Scene2,
    rc: &RegionCells,
    pred: impl Fn(CellLabel) -> bool,
) -> Vec<RegionComponent> {
    let chosen: Vec<usize> = (0..rc.cells.len())
        .filter(|&i| pred(rc.cells[i].label))
        .collect();
    if chosen.is_empty() {
        return Vec::new();
    }
    let index: BTreeMap<usize, usize> = chosen.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let links: Vec<(usize, usize)> = rc
        .facets()
        .into_iter()
        .filter_map(|f| {
            let (ka, kb) = (index.get(&f.a)?, index.get(&f.b)?);
            let joined = classify_point(s, &f.midpoint()).label().is_some_and(&pred);
            joined.then_some((*ka, *kb))
        })
        .collect();
    group_by_links(chosen.len(), links)
        .into_iter()
        .map(|group| {
            let cells: Vec<usize> = group.into_iter().map(|k| chosen[k]).collect();
            let area = cells
                .iter()
                .map(|&i| rc.cells[i].poly.area())
                .fold(Scalar::zero(), |a, b| a + b);
            let pts: Vec<Point2> = cells
                .iter()
                .flat_map(|&i| rc.cells[i].poly.vertices().iter().cloned())
                .collect();
            let hull_area = convex_hull(&pts)
                .map(|h| h.area())
                .unwrap_or_else(|_| Scalar::zero());
            RegionComponent {
                convex: hull_area == area,
                cells,
                area,
                hull_area,
            }
        })
        .collect()
}

/// Exact area of the symmetric difference between the union of the cells
/// carrying a trapped label and the open convex polygon `target`.
pub fn symmetric_difference_area(rc: &RegionCells, mode: Mode, target: &ConvexPoly) -> Scalar {
    let mut inside = Scalar::zero();
    let mut total = Scalar::zero();
    for (_, c) in rc.trapped_cells(mode) {
        total += c.poly.area();
        if let Some(common) = c.poly.clip(target) {
            inside += common.area();
        }
    }
    // |A Δ P| = |A| + |P| - 2 |A ∩ P|
    total + target.area() - inside * int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio;
    use crate::scene::unit_square;

    #[test]
    fn single_poly_has_no_trapped_cells() {
        let s = Scene2::new(vec![unit_square()]);
        let rc = trap_region(&s).unwrap();
        assert!(rc
            .cells
            .iter()
            .all(|c| matches!(c.label, CellLabel::InE | CellLabel::Free)));
        assert_eq!(rc.area_with(|l| l == CellLabel::InE), int(1));
        let total = rc.area_with(|_| true);
        assert_eq!(total, rc.bbox.width() * rc.bbox.height());
    }

    #[test]
    fn empty_scene_region() {
        let rc = trap_region(&Scene2::empty()).unwrap();
        assert_eq!(rc.cells.len(), 1);
        assert_eq!(rc.cells[0].label, CellLabel::Free);
        assert!(
            region_components(&Scene2::empty(), &rc, |l| l == CellLabel::TrappedBoth).is_empty()
        );
    }

    #[test]
    fn locate_descends() {
        let s = Scene2::new(vec![unit_square()]);
        let rc = trap_region(&s).unwrap();
        let inside = Point2::new(ratio(1, 3), ratio(1, 5));
        assert_eq!(rc.label_at(&inside), Some(CellLabel::InE));
        assert_eq!(rc.label_at(&Point2::new(int(0), ratio(1, 2))), None);
    }

    #[test]
    fn facets_pair_up_neighbours() {
        let s = Scene2::new(vec![unit_square()]);
        let rc = trap_region(&s).unwrap();
        let f = rc.facets();
        assert!(!f.is_empty());
        for facet in &f {
            assert_ne!(facet.a, facet.b);
            assert_ne!(facet.p, facet.q);
        }
    }
}
