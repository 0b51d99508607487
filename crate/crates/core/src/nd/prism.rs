//! Oblique prisms in ℝ³: a horizontal convex base swept along an axis.

use num_traits::{Signed, Zero};

use super::cell::{ConvexCell, HalfSpace, Interval, PointN};
use crate::error::{Error, Result};
use crate::geom::{cross3, ConvexPoly, Point2, Scalar};
use crate::scene::Membership;

/// Parameter range `t0..t1` with per-end flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TRange {
    pub lo: Scalar,
    pub hi: Scalar,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl TRange {
    pub fn new(lo: Scalar, hi: Scalar, lo_closed: bool, hi_closed: bool) -> Self {
        Self {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        let above = if self.lo_closed {
            t >= &self.lo
        } else {
            t > &self.lo
        };
        let below = if self.hi_closed {
            t <= &self.hi
        } else {
            t < &self.hi
        };
        above && below
    }

    pub fn as_interval(&self) -> Interval {
        let mut iv = Interval::everything();
        iv.raise_lo(self.lo.clone(), self.lo_closed);
        iv.lower_hi(self.hi.clone(), self.hi_closed);
        iv
    }
}

/// `{x + t a : x ∈ base at height z0, t ∈ range}` with the base open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prism {
    pub base: ConvexPoly,
    pub z0: Scalar,
    pub axis: [Scalar; 3],
    pub range: TRange,
}

impl Prism {
    pub fn new(base: ConvexPoly, z0: Scalar, axis: [Scalar; 3], range: TRange) -> Result<Self> {
        if axis[2].is_zero() {
            return Err(Error::InvalidConstruction(
                "prism axis must leave the base plane".into(),
            ));
        }
        if range.lo > range.hi || (range.lo == range.hi && !(range.lo_closed && range.hi_closed)) {
            return Err(Error::InvalidConstruction(
                "empty prism parameter range".into(),
            ));
        }
        Ok(Self {
            base,
            z0,
            axis,
            range,
        })
    }

    pub fn t_at(&self, z: &Scalar) -> Scalar {
        (z - &self.z0) / &self.axis[2]
    }

    /// The base-plane point reached by sliding `p` back along the axis, and
    /// the parameter it was slid by.
    pub fn project(&self, p: &[Scalar]) -> (Point2, Scalar) {
        let t = self.t_at(&p[2]);
        let x = Point2::new(&p[0] - &t * &self.axis[0], &p[1] - &t * &self.axis[1]);
        (x, t)
    }

    pub fn lift(&self, x: &Point2, t: &Scalar) -> PointN {
        vec![
            &x.x + t * &self.axis[0],
            &x.y + t * &self.axis[1],
            &self.z0 + t * &self.axis[2],
        ]
    }

    /// Horizontal cross-section at height `z`: the base translated along the
    /// axis, if `z` is within the range.
    pub fn slice(&self, z: &Scalar) -> Option<ConvexPoly> {
        let t = self.t_at(z);
        self.range.contains(&t).then(|| {
            self.base
                .translate(&(&t * &self.axis[0]), &(&t * &self.axis[1]))
        })
    }

    /// Heights spanned by the closed prism.
    pub fn z_span(&self) -> (Scalar, Scalar) {
        let a = &self.z0 + &self.range.lo * &self.axis[2];
        let b = &self.z0 + &self.range.hi * &self.axis[2];
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn cell(&self) -> ConvexCell {
        let mut hs = Vec::with_capacity(self.base.len() + 2);
        for (u, v) in self.base.edges() {
            let (u, v, me) = (u.clone(), v.clone(), self.clone());
            hs.push(HalfSpace::from_affine(
                3,
                move |p| {
                    let (x, _) = me.project(p);
                    cross3(&u, &v, &x)
                },
                true,
            ));
        }
        let me = self.clone();
        hs.push(HalfSpace::from_affine(
            3,
            move |p| me.t_at(&p[2]) - &me.range.lo,
            !self.range.lo_closed,
        ));
        let me = self.clone();
        hs.push(HalfSpace::from_affine(
            3,
            move |p| &me.range.hi - me.t_at(&p[2]),
            !self.range.hi_closed,
        ));
        ConvexCell::new(3, hs)
    }

    pub fn locate(&self, p: &[Scalar]) -> Membership {
        self.cell().locate(p)
    }

    /// Vertices of the closed prism.
    pub fn vertices(&self) -> Vec<PointN> {
        let mut out = Vec::with_capacity(2 * self.base.len());
        for t in [&self.range.lo, &self.range.hi] {
            for v in self.base.vertices() {
                out.push(self.lift(v, t));
            }
        }
        out
    }

    pub fn volume(&self) -> Scalar {
        self.base.area() * (&self.range.hi - &self.range.lo) * self.axis[2].abs()
    }

    pub fn translate(&self, offset: &[Scalar]) -> Prism {
        Prism {
            base: self.base.translate(&offset[0], &offset[1]),
            z0: &self.z0 + &offset[2],
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, ratio};
    use crate::scene::unit_square;

    fn slanted() -> Prism {
        Prism::new(
            unit_square(),
            int(0),
            [int(1), int(0), int(2)],
            TRange::new(int(0), int(1), true, false),
        )
        .unwrap()
    }

    #[test]
    fn flags_are_honoured() {
        let q = slanted();
        let h = ratio(1, 2);
        assert_eq!(q.locate(&[h.clone(), h.clone(), int(0)]), Membership::InE);
        // top end is open: (1/2 + 1, 1/2, 2) is only on the boundary
        assert_eq!(
            q.locate(&[ratio(3, 2), h.clone(), int(2)]),
            Membership::OnBoundary
        );
        assert_eq!(q.locate(&[h.clone(), h, int(3)]), Membership::Outside);
    }

    #[test]
    fn slices_translate_the_base() {
        let q = slanted();
        let s = q.slice(&int(1)).unwrap();
        assert_eq!(s, unit_square().translate(&ratio(1, 2), &int(0)));
        assert!(q.slice(&int(2)).is_none());
        assert!(q.slice(&int(0)).is_some());
        assert_eq!(q.volume(), int(2));
        assert_eq!(q.z_span(), (int(0), int(2)));
    }

    #[test]
    fn horizontal_axis_is_rejected() {
        let r = Prism::new(
            unit_square(),
            int(0),
            [int(1), int(0), int(0)],
            TRange::new(int(0), int(1), true, true),
        );
        assert!(r.is_err());
    }
}
