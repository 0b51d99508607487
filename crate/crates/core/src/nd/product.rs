//! Product scenes `E^{n-1} × (-1, 1)` capped above and below by the convex
//! hull of the inner scene.

use num_traits::{Signed, Zero};

use super::cell::{along, ConvexCell, HalfSpace, PointN};
use super::{BlockWitness, PrismScene, Route};
use crate::error::{Error, Result};
use crate::geom::{int, ratio, Scalar};
use crate::scene::Membership;

#[derive(Clone, Debug)]
pub struct ProductScene {
    pub n: usize,
    pub inner: Box<PrismScene>,
    /// Open convex hull of the inner scene, in ℝ^{n-1}.
    pub hull: ConvexCell,
    /// `hull × (-3/2, -1)` and `hull × (1, 3/2)`.
    pub caps: [ConvexCell; 2],
}

/// Which horizontal piece a last-coordinate value falls in.
pub enum Layer {
    Middle,
    Cap,
    Empty,
}

impl ProductScene {
    pub(crate) fn new(inner: PrismScene) -> Result<Self> {
        let hull = inner.hull_cell()?;
        let n = inner.dim() + 1;
        let caps = [
            hull.times_interval(&ratio(-3, 2), &int(-1)),
            hull.times_interval(&int(1), &ratio(3, 2)),
        ];
        Ok(ProductScene {
            n,
            inner: Box::new(inner),
            hull,
            caps,
        })
    }

    pub fn layer(w: &Scalar) -> Layer {
        let a = w.abs();
        if a < int(1) {
            Layer::Middle
        } else if a > int(1) && a < ratio(3, 2) {
            Layer::Cap
        } else {
            Layer::Empty
        }
    }

    fn split<'a>(&self, x: &'a [Scalar]) -> (&'a [Scalar], &'a Scalar) {
        (&x[..self.n - 1], &x[self.n - 1])
    }

    pub fn contains(&self, x: &[Scalar]) -> Result<Membership> {
        let (inner, w) = self.split(x);
        let mut boundary = false;
        for c in &self.caps {
            match c.locate(x) {
                Membership::InE => return Ok(Membership::InE),
                Membership::OnBoundary => boundary = true,
                Membership::Outside => {}
            }
        }
        if w.abs() <= int(1) {
            match self.inner.contains(inner)? {
                Membership::InE if w.abs() < int(1) => return Ok(Membership::InE),
                Membership::Outside => {}
                _ => boundary = true,
            }
        }
        Ok(if boundary {
            Membership::OnBoundary
        } else {
            Membership::Outside
        })
    }

    pub fn predicted_locate(&self, x: &[Scalar]) -> Result<Membership> {
        let (inner, w) = self.split(x);
        if w.abs() > int(1) {
            return Ok(Membership::Outside);
        }
        Ok(match self.inner.predicted_locate(inner)? {
            Membership::InE if w.abs() < int(1) => Membership::InE,
            Membership::Outside => Membership::Outside,
            _ => Membership::OnBoundary,
        })
    }

    /// Every solid of the scene as a cell in ℝⁿ.
    pub fn solid_cells(&self) -> Result<Vec<ConvexCell>> {
        let mut out: Vec<ConvexCell> = self
            .inner
            .solid_cells()?
            .iter()
            .map(|c| c.times_interval(&int(-1), &int(1)))
            .collect();
        out.extend(self.caps.iter().cloned());
        Ok(out)
    }

    /// Escape line from the slice through `y` along the last coordinate:
    /// the inner scene's escape line in the middle layer, a line along a
    /// separating facet of the hull in a cap layer, any line otherwise.
    pub fn escape_via_slice(&self, y: &[Scalar]) -> Result<Option<PointN>> {
        let (inner, w) = self.split(y);
        let dir = match Self::layer(w) {
            Layer::Middle => match self.inner.escape_via_slice(inner)? {
                Some(d) => d,
                None => return Ok(None),
            },
            Layer::Cap => {
                let Some(h) = self.hull.halfspaces.iter().find(|h| !h.holds(inner)) else {
                    return Ok(None);
                };
                orthogonal_to(h)
            }
            Layer::Empty => {
                let mut d = vec![Scalar::zero(); self.n - 1];
                d[0] = int(1);
                d
            }
        };
        let mut dir = dir;
        dir.push(Scalar::zero());
        Ok(Some(dir))
    }

    pub fn blocked_witness(&self, y: &[Scalar], a: &[Scalar]) -> Result<Option<BlockWitness>> {
        if let Some(s) = self
            .caps
            .iter()
            .filter_map(|c| c.chord(y, a).ray_part().sample())
            .min()
        {
            return Ok(Some(BlockWitness {
                point: along(y, a, &s),
                param: s,
                route: Route::Cap,
                floors: 0,
            }));
        }
        let (yi, _) = self.split(y);
        let (ai, _) = self.split(a);
        if !ai.iter().all(Zero::is_zero) {
            if let Some(w) = self.inner.blocked_witness(yi, ai)? {
                // same parameter on the original ray
                let point = along(y, a, &w.param);
                if self.contains(&point)? == Membership::InE {
                    return Ok(Some(BlockWitness { point, ..w }));
                }
            }
        }
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

/// A nonzero direction orthogonal to the half-space normal.
fn orthogonal_to(h: &HalfSpace) -> PointN {
    let n = &h.normal;
    let i = n.iter().position(|c| !c.is_zero()).expect("nonzero normal");
    let j = if i == 0 { 1 } else { 0 };
    let mut d = vec![Scalar::zero(); n.len()];
    d[j] = n[i].clone();
    d[i] = -n[j].clone();
    d
}

impl From<ProductScene> for PrismScene {
    fn from(p: ProductScene) -> Self {
        PrismScene::Product(p)
    }
}

pub(crate) fn check_dimension(inner: &PrismScene, n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidConstruction(format!(
            "product scenes start in dimension 4, got {n}"
        )));
    }
    if inner.dim() + 1 != n {
        return Err(Error::InvalidConstruction(format!(
            "inner scene has dimension {}, expected {}",
            inner.dim(),
            n - 1
        )));
    }
    Ok(())
}
