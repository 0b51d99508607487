//! Three-dimensional prism scenes built over a planar cut scene: the bounded
//! mirror pair and the stacked zig-zag with lazily generated floors.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cell::{along, ConvexCell, Interval, PointN};
use super::prism::{Prism, TRange};
use super::{BlockWitness, Route};
use crate::construct::CutScene;
use crate::error::{Error, Result};
use crate::geom::{convex_hull, int, ratio, ConvexPoly, Point2, Scalar};
use crate::sampling::{point_in_poly, rational_between, SampleRng};
use crate::scene::Membership;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum E3Variant {
    Bounded,
    Stacked,
}

/// One oblique layer: a prism over every piece of the planar scene and one
/// over the trapped polygon P, all sharing axis, base height and range.
#[derive(Debug)]
pub struct Floor {
    pub index: usize,
    pub pieces: Vec<Prism>,
    pub p: Prism,
    piece_cells: Vec<ConvexCell>,
    p_cell: ConvexCell,
    p_closed: ConvexCell,
}

impl Floor {
    fn new(index: usize, template: &Prism, pieces: &[ConvexPoly], p: &ConvexPoly) -> Self {
        let pieces: Vec<Prism> = pieces
            .iter()
            .map(|q| Prism {
                base: q.clone(),
                ..template.clone()
            })
            .collect();
        let p = Prism {
            base: p.clone(),
            ..template.clone()
        };
        let p_cell = p.cell();
        Floor {
            index,
            piece_cells: pieces.iter().map(Prism::cell).collect(),
            p_closed: p_cell.closure(),
            p_cell,
            pieces,
            p,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cap {
    pub prism: Prism,
    cell: ConvexCell,
}

impl Cap {
    fn new(prism: Prism) -> Self {
        Cap {
            cell: prism.cell(),
            prism,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Next {
    Floor(usize),
    Cap(usize),
}

#[derive(Debug)]
pub struct E3Scene {
    pub variant: E3Variant,
    pub base: CutScene,
    /// The upward axis a₊; the downward one mirrors its vertical part.
    pub axis: [Scalar; 3],
    pub budget: usize,
    pub caps: Vec<Cap>,
    floors: RwLock<Vec<Arc<Floor>>>,
}

impl Clone for E3Scene {
    fn clone(&self) -> Self {
        E3Scene {
            variant: self.variant,
            base: self.base.clone(),
            axis: self.axis.clone(),
            budget: self.budget,
            caps: self.caps.clone(),
            floors: RwLock::new(self.floors.read().expect("floor cache").clone()),
        }
    }
}

impl E3Scene {
    pub(crate) fn new(
        variant: E3Variant,
        base: CutScene,
        axis: [Scalar; 3],
        budget: usize,
    ) -> Result<Self> {
        if !axis[2].is_positive() || (axis[0].is_zero() && axis[1].is_zero()) {
            return Err(Error::InvalidConstruction(
                "axis must make an angle strictly between 0 and π/2 with the vertical".into(),
            ));
        }
        let rho = axis[2].clone();
        let d_shift = base.spec.d.translate(&axis[0], &axis[1]);
        let vertical = |sign: i64| [Scalar::zero(), Scalar::zero(), int(sign)];
        let cap_range = TRange::new(Scalar::zero(), &rho * ratio(1, 2), false, false);
        let bottom = Prism::new(
            d_shift.clone(),
            -rho.clone(),
            vertical(-1),
            cap_range.clone(),
        )?;
        let mut caps = vec![Cap::new(bottom)];
        if variant == E3Variant::Bounded {
            caps.push(Cap::new(Prism::new(d_shift, rho, vertical(1), cap_range)?));
        }
        let scene = E3Scene {
            variant,
            base,
            axis,
            budget: if variant == E3Variant::Bounded {
                1
            } else {
                budget
            },
            caps,
            floors: RwLock::new(Vec::new()),
        };
        Ok(scene)
    }

    pub fn rho(&self) -> &Scalar {
        &self.axis[2]
    }

    pub fn p(&self) -> &ConvexPoly {
        &self.base.spec.p
    }

    fn template(&self, k: usize) -> Prism {
        let up = self.axis.clone();
        let down = [up[0].clone(), up[1].clone(), -up[2].clone()];
        let (z0, axis, range) = match self.variant {
            E3Variant::Bounded => (
                Scalar::zero(),
                if k == 0 { down } else { up },
                TRange::new(Scalar::zero(), Scalar::one(), true, false),
            ),
            E3Variant::Stacked => {
                let z0 = self.rho() * int(2 * (k / 2) as i64);
                if k.is_multiple_of(2) {
                    (
                        z0,
                        down,
                        TRange::new(Scalar::zero(), Scalar::one(), false, false),
                    )
                } else {
                    (
                        z0,
                        up,
                        TRange::new(Scalar::zero(), Scalar::one(), true, true),
                    )
                }
            }
        };
        Prism::new(self.p().clone(), z0, axis, range).expect("valid floor template")
    }

    /// Floor `k`, generated on first use. Floors beyond the budget are
    /// refused.
    pub fn floor(&self, k: usize) -> Result<Arc<Floor>> {
        if k > self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        if let Some(f) = self.floors.read().expect("floor cache").get(k) {
            return Ok(f.clone());
        }
        let mut w = self.floors.write().expect("floor cache");
        while w.len() <= k {
            let i = w.len();
            let f = Floor::new(i, &self.template(i), self.base.scene.polys(), self.p());
            w.push(Arc::new(f));
        }
        Ok(w[k].clone())
    }

    /// Number of floors generated so far.
    pub fn floors_built(&self) -> usize {
        self.floors.read().expect("floor cache").len()
    }

    /// Floors whose closed height span contains `z`.
    pub fn floors_at(&self, z: &Scalar) -> Result<Vec<Arc<Floor>>> {
        match self.variant {
            E3Variant::Bounded => {
                let mut out = Vec::new();
                for k in 0..2 {
                    let f = self.floor(k)?;
                    let (lo, hi) = f.p.z_span();
                    if &lo <= z && z <= &hi {
                        out.push(f);
                    }
                }
                Ok(out)
            }
            E3Variant::Stacked => {
                // floor k spans heights [(k-1)ρ, kρ]
                let q = z / self.rho();
                let mut ks = vec![q.ceil().to_integer(), q.floor().to_integer() + 1];
                ks.dedup();
                let mut out = Vec::new();
                for k in ks {
                    if k.is_negative() {
                        continue;
                    }
                    let k: usize = k.try_into().map_err(|_| Error::BudgetExhausted {
                        budget: self.budget,
                    })?;
                    out.push(self.floor(k)?);
                }
                Ok(out)
            }
        }
    }

    fn next(&self, k: usize, at_hi: bool) -> Next {
        match (self.variant, k % 2, at_hi) {
            (E3Variant::Bounded, _, false) => Next::Floor(1 - k),
            (E3Variant::Bounded, _, true) => Next::Cap(k),
            (E3Variant::Stacked, 0, false) => Next::Floor(k + 1),
            (E3Variant::Stacked, 0, true) if k == 0 => Next::Cap(0),
            (E3Variant::Stacked, 0, true) => Next::Floor(k - 1),
            (E3Variant::Stacked, _, false) => Next::Floor(k - 1),
            (E3Variant::Stacked, _, true) => Next::Floor(k + 1),
        }
    }

    pub fn contains(&self, x: &[Scalar]) -> Result<Membership> {
        let mut boundary = false;
        let floors = self.floors_at(&x[2])?;
        let cells = floors
            .iter()
            .flat_map(|f| f.piece_cells.iter())
            .chain(self.caps.iter().map(|c| &c.cell));
        for c in cells {
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

    /// Location relative to the predicted trapped set, the union of the
    /// prisms over P.
    pub fn predicted_locate(&self, x: &[Scalar]) -> Result<Membership> {
        let mut boundary = false;
        for f in self.floors_at(&x[2])? {
            match f.p_cell.locate(x) {
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

    /// Horizontal cross-sections of every solid at height `z`.
    pub fn slice_polys(&self, z: &Scalar) -> Result<(Vec<ConvexPoly>, Vec<ConvexPoly>)> {
        let mut pieces = Vec::new();
        for f in self.floors_at(z)? {
            pieces.extend(f.pieces.iter().filter_map(|q| q.slice(z)));
        }
        let caps = self.caps.iter().filter_map(|c| c.prism.slice(z)).collect();
        Ok((pieces, caps))
    }

    /// Cells a line or ray from `origin` along `dir` could meet. Upward
    /// unbounded searches in the stacked scene stop at the budget and say
    /// so through the flag.
    fn cells_along(
        &self,
        origin: &[Scalar],
        dir: &[Scalar],
        ray: bool,
    ) -> Result<(Vec<ConvexCell>, bool)> {
        let mut cells: Vec<ConvexCell> = self.caps.iter().map(|c| c.cell.clone()).collect();
        let mut truncated = false;
        let ks: Vec<usize> = match self.variant {
            E3Variant::Bounded => vec![0, 1],
            E3Variant::Stacked => {
                if dir[2].is_zero() {
                    self.floors_at(&origin[2])?
                        .iter()
                        .map(|f| f.index)
                        .collect()
                } else {
                    let top = if dir[2].is_negative() && ray {
                        let q: BigInt = (&origin[2] / self.rho()).floor().to_integer() + 1;
                        usize::try_from(q.max(BigInt::zero())).unwrap_or(usize::MAX)
                    } else {
                        usize::MAX
                    };
                    if top > self.budget {
                        truncated = true;
                    }
                    (0..=top.min(self.budget)).collect()
                }
            }
        };
        for k in ks {
            cells.extend(self.floor(k)?.piece_cells.iter().cloned());
        }
        Ok((cells, truncated))
    }

    /// Whether the full line misses every solid; `Err` when that cannot be
    /// decided within the budget.
    pub fn line_misses(&self, origin: &[Scalar], dir: &[Scalar]) -> Result<bool> {
        let (cells, truncated) = self.cells_along(origin, dir, false)?;
        let hit = cells.iter().any(|c| !c.chord(origin, dir).is_empty());
        if !hit && truncated {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        Ok(!hit)
    }

    fn direct_witness(&self, y: &[Scalar], a: &[Scalar]) -> Result<Option<BlockWitness>> {
        let (cells, truncated) = self.cells_along(y, a, true)?;
        let best = cells
            .iter()
            .filter_map(|c| c.chord(y, a).ray_part().sample())
            .min();
        match best {
            Some(s) => Ok(Some(BlockWitness {
                point: along(y, a, &s),
                param: s,
                route: Route::Direct,
                floors: 0,
            })),
            None if truncated => Err(Error::BudgetExhausted {
                budget: self.budget,
            }),
            None => Ok(None),
        }
    }

    /// A point of E on the ray from `y` along `a`. From inside a prism over
    /// P the ray is followed floor by floor: leaving through a lateral face
    /// it enters the floor's prisms over E² right away, found by projecting
    /// along the floor axis onto the base plane; leaving through a base it
    /// enters a cap or the neighbouring floor's prism over P. Anything else
    /// falls back to intersecting the ray with every solid.
    pub fn blocked_witness(&self, y: &[Scalar], a: &[Scalar]) -> Result<Option<BlockWitness>> {
        if let Some(w) = self.march(y, a)? {
            if self.contains(&w.point)? == Membership::InE {
                return Ok(Some(w));
            }
        }
        self.direct_witness(y, a)
    }

    fn march(&self, y: &[Scalar], a: &[Scalar]) -> Result<Option<BlockWitness>> {
        let start = self
            .floors_at(&y[2])?
            .into_iter()
            .find(|f| f.p_closed.locate(y) != Membership::Outside);
        let Some(mut floor) = start else {
            return Ok(None);
        };
        let mut visited = 1usize;
        let mut reached = Scalar::zero();
        loop {
            let iv = floor.p_closed.chord(y, a).ray_part();
            if iv.is_empty() {
                return Ok(None);
            }
            let Some(exit) = iv.hi.map(|b| b.value) else {
                return Ok(None);
            };
            if visited > 1 && exit <= reached {
                return Ok(None);
            }
            reached = exit.clone();
            let t = floor.p.t_at(&(&y[2] + &exit * &a[2]));
            let range = &floor.p.range;
            if range.lo < t && t < range.hi {
                return Ok(self.lateral_witness(&floor, y, a).map(|w| BlockWitness {
                    floors: visited,
                    ..w
                }));
            }
            match self.next(floor.index, t == range.hi) {
                Next::Cap(i) => {
                    let s = self.caps[i].cell.chord(y, a).ray_part().sample();
                    return Ok(s.map(|s| BlockWitness {
                        point: along(y, a, &s),
                        param: s,
                        route: Route::Cap,
                        floors: visited,
                    }));
                }
                Next::Floor(k) => {
                    floor = self.floor(k)?;
                    visited += 1;
                }
            }
        }
    }

    /// Projects the ray along the floor axis onto the base plane and
    /// intersects the planar ray with the pieces of E², keeping only
    /// parameters where the lifted point stays within the floor.
    fn lateral_witness(&self, floor: &Floor, y: &[Scalar], a: &[Scalar]) -> Option<BlockWitness> {
        let pr = &floor.p;
        let (x0, t0) = pr.project(y);
        let k = &a[2] / &pr.axis[2];
        let bx = &a[0] - &k * &pr.axis[0];
        let by = &a[1] - &k * &pr.axis[1];
        if bx.is_zero() && by.is_zero() {
            return None;
        }
        // t(s) = t0 + k s must stay in the floor's range
        let mut window = Interval::everything();
        if k.is_zero() {
            if !pr.range.contains(&t0) {
                return None;
            }
        } else {
            let lo = (&pr.range.lo - &t0) / &k;
            let hi = (&pr.range.hi - &t0) / &k;
            let (lo, lo_c, hi, hi_c) = if k.is_positive() {
                (lo, pr.range.lo_closed, hi, pr.range.hi_closed)
            } else {
                (hi, pr.range.hi_closed, lo, pr.range.lo_closed)
            };
            window.raise_lo(lo, lo_c);
            window.lower_hi(hi, hi_c);
        }
        let window = window.ray_part();
        floor
            .pieces
            .iter()
            .filter_map(|q| {
                let (lo, hi) = q.base.chord(&x0, &bx, &by)?;
                let mut iv = Interval::everything();
                iv.raise_lo(lo, false);
                iv.lower_hi(hi, false);
                iv.intersect(&window).sample()
            })
            .min()
            .map(|s| BlockWitness {
                point: along(y, a, &s),
                param: s,
                route: Route::Lateral { floor: floor.index },
                floors: 1,
            })
    }

    /// Vertices of every bounded solid, thinned to the planar hull of each
    /// height layer.
    pub fn hull_points(&self) -> Result<Vec<PointN>> {
        if self.variant == E3Variant::Stacked {
            return Err(Error::InvalidConstruction(
                "the stacked scene is unbounded".into(),
            ));
        }
        let mut layers: BTreeMap<Scalar, Vec<Point2>> = BTreeMap::new();
        let mut prisms: Vec<Prism> = self.caps.iter().map(|c| c.prism.clone()).collect();
        for k in 0..2 {
            prisms.extend(self.floor(k)?.pieces.iter().cloned());
        }
        for q in &prisms {
            for v in q.vertices() {
                layers
                    .entry(v[2].clone())
                    .or_default()
                    .push(Point2::new(v[0].clone(), v[1].clone()));
            }
        }
        let mut out = Vec::new();
        for (z, pts) in layers {
            let thin = convex_hull(&pts)
                .map(|h| h.vertices().to_vec())
                .unwrap_or(pts);
            out.extend(thin.into_iter().map(|p| vec![p.x, p.y, z.clone()]));
        }
        Ok(out)
    }

    /// A random point of the open prism over P on floor `k`.
    pub fn sample_in_p_floor(&self, rng: &mut SampleRng, k: usize) -> Result<PointN> {
        let f = self.floor(k)?;
        let x = point_in_poly(rng, &f.p.base);
        let t = loop {
            let t = rational_between(rng, &f.p.range.lo, &f.p.range.hi);
            if f.p.range.contains(&t) && t != f.p.range.lo && t != f.p.range.hi {
                break t;
            }
        };
        Ok(f.p.lift(&x, &t))
    }

    /// Axis-aligned box around the solids, for rejection sampling.
    pub fn sample_box(&self) -> Result<(PointN, PointN)> {
        let pts = self.hull_points()?;
        let mut lo = pts[0].clone();
        let mut hi = pts[0].clone();
        for p in &pts {
            for c in 0..3 {
                if p[c] < lo[c] {
                    lo[c] = p[c].clone();
                }
                if p[c] > hi[c] {
                    hi[c] = p[c].clone();
                }
            }
        }
        for c in 0..3 {
            let pad = (&hi[c] - &lo[c]) * ratio(1, 8);
            lo[c] -= &pad;
            hi[c] += &pad;
        }
        Ok((lo, hi))
    }

    /// The two prisms over P of the bounded scene share their base at z = 0
    /// and both keep it, so their union is connected there.
    pub fn p_prisms_share_base(&self) -> Result<bool> {
        let (lower, upper) = (self.floor(0)?, self.floor(1)?);
        let (a, b) = (&lower.p, &upper.p);
        if a.base != b.base || a.z0 != b.z0 || !a.range.lo.is_zero() || !b.range.lo.is_zero() {
            return Ok(false);
        }
        if !(a.range.lo_closed && b.range.lo_closed) {
            return Ok(false);
        }
        let c = a.base.centroid();
        let eps = ratio(1, 1024);
        let probe = |z: Scalar| vec![c.x.clone(), c.y.clone(), z];
        Ok(
            self.predicted_locate(&probe(Scalar::zero()))? == Membership::InE
                && a.locate(&along(&probe(Scalar::zero()), &a.axis, &eps)) == Membership::InE
                && b.locate(&along(&probe(Scalar::zero()), &b.axis, &eps)) == Membership::InE,
        )
    }
}
