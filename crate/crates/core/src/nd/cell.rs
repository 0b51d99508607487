//! Convex cells in ℝⁿ given by open and closed half-spaces.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::geom::Scalar;
use crate::scene::Membership;

pub type PointN = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Scalar::zero(), |s, v| s + v)
}

/// `origin + t * dir`.
pub fn along(origin: &[Scalar], dir: &[Scalar], t: &Scalar) -> PointN {
    origin.iter().zip(dir).map(|(o, d)| o + d * t).collect()
}

pub fn fmt_point(p: &[Scalar]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `{x : normal · x < offset}` when strict, `≤` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
    pub strict: bool,
}

impl HalfSpace {
    /// Half-space `f(x) > 0` (or `≥ 0`) for the affine function `f`, whose
    /// coefficients are recovered by evaluating at the origin and the unit
    /// vectors.
    pub fn from_affine(dim: usize, f: impl Fn(&[Scalar]) -> Scalar, strict: bool) -> Self {
        let zero = vec![Scalar::zero(); dim];
        let f0 = f(&zero);
        let normal = (0..dim)
            .map(|i| {
                let mut e = zero.clone();
                e[i] = Scalar::one();
                -(f(&e) - &f0)
            })
            .collect();
        Self {
            normal,
            offset: f0,
            strict,
        }
    }

    /// Slack `offset - normal · x`; positive strictly inside.
    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        &self.offset - dot(&self.normal, x)
    }

    pub fn holds(&self, x: &[Scalar]) -> bool {
        let s = self.slack(x);
        if self.strict {
            s.is_positive()
        } else {
            !s.is_negative()
        }
    }

    /// The same half-space in ℝ^(n+1), ignoring the new last coordinate.
    pub fn lift(&self) -> HalfSpace {
        let mut normal = self.normal.clone();
        normal.push(Scalar::zero());
        HalfSpace {
            normal,
            offset: self.offset.clone(),
            strict: self.strict,
        }
    }

    pub fn closed(&self) -> HalfSpace {
        HalfSpace {
            strict: false,
            ..self.clone()
        }
    }
}

/// One end of a parameter interval: value and whether it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: Scalar,
    pub closed: bool,
}

/// A possibly unbounded interval of line parameters; `None` ends are
/// infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn everything() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => match a.value.cmp(&b.value) {
                Ordering::Less => false,
                Ordering::Equal => !(a.closed && b.closed),
                Ordering::Greater => true,
            },
            _ => false,
        }
    }

    pub fn raise_lo(&mut self, value: Scalar, closed: bool) {
        match &mut self.lo {
            Some(b) if b.value > value => {}
            Some(b) if b.value == value => b.closed &= closed,
            lo => *lo = Some(Bound { value, closed }),
        }
    }

    pub fn lower_hi(&mut self, value: Scalar, closed: bool) {
        match &mut self.hi {
            Some(b) if b.value < value => {}
            Some(b) if b.value == value => b.closed &= closed,
            hi => *hi = Some(Bound { value, closed }),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let mut out = self.clone();
        if let Some(b) = &other.lo {
            out.raise_lo(b.value.clone(), b.closed);
        }
        if let Some(b) = &other.hi {
            out.lower_hi(b.value.clone(), b.closed);
        }
        out
    }

    /// Restricts to `t ≥ 0`.
    pub fn ray_part(&self) -> Interval {
        let mut out = self.clone();
        out.raise_lo(Scalar::zero(), true);
        out
    }

    /// Some parameter inside a nonempty interval.
    pub fn sample(&self) -> Option<Scalar> {
        if self.is_empty() {
            return None;
        }
        Some(match (&self.lo, &self.hi) {
            (Some(a), Some(b)) if a.value == b.value => a.value.clone(),
            (Some(a), Some(b)) => (&a.value + &b.value) / Scalar::from_integer(2.into()),
            (Some(a), None) => &a.value + Scalar::one(),
            (None, Some(b)) => &b.value - Scalar::one(),
            (None, None) => Scalar::zero(),
        })
    }
}

/// Intersection of finitely many half-spaces in ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCell {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpace>,
}

impl ConvexCell {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Self {
        debug_assert!(halfspaces.iter().all(|h| h.normal.len() == dim));
        Self { dim, halfspaces }
    }

    /// `InE` when every constraint holds as stated (so closed faces count as
    /// members), `OnBoundary` when only the closure contains `x`.
    pub fn locate(&self, x: &[Scalar]) -> Membership {
        let mut on_open_face = false;
        for h in &self.halfspaces {
            let s = h.slack(x);
            if s.is_negative() {
                return Membership::Outside;
            }
            if s.is_zero() && h.strict {
                on_open_face = true;
            }
        }
        if on_open_face {
            Membership::OnBoundary
        } else {
            Membership::InE
        }
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.locate(x) == Membership::InE
    }

    /// Parameters `t` with `origin + t * dir` in the cell.
    pub fn chord(&self, origin: &[Scalar], dir: &[Scalar]) -> Interval {
        let mut iv = Interval::everything();
        for h in &self.halfspaces {
            let c = h.slack(origin);
            let m = dot(&h.normal, dir);
            // need c - t m > 0 (or ≥ 0)
            if m.is_zero() {
                if !h.holds(origin) {
                    return Interval {
                        lo: Some(Bound {
                            value: Scalar::one(),
                            closed: false,
                        }),
                        hi: Some(Bound {
                            value: Scalar::zero(),
                            closed: false,
                        }),
                    };
                }
            } else if m.is_positive() {
                iv.lower_hi(c / m, !h.strict);
            } else {
                iv.raise_lo(c / m, !h.strict);
            }
        }
        iv
    }

    pub fn closure(&self) -> ConvexCell {
        ConvexCell::new(
            self.dim,
            self.halfspaces.iter().map(HalfSpace::closed).collect(),
        )
    }

    /// `self × (lo, hi)` in ℝ^(n+1).
    pub fn times_interval(&self, lo: &Scalar, hi: &Scalar) -> ConvexCell {
        let n = self.dim + 1;
        let mut hs: Vec<HalfSpace> = self.halfspaces.iter().map(HalfSpace::lift).collect();
        let (lo, hi) = (lo.clone(), hi.clone());
        hs.push(HalfSpace::from_affine(n, move |x| &x[n - 1] - &lo, true));
        hs.push(HalfSpace::from_affine(n, move |x| &hi - &x[n - 1], true));
        ConvexCell::new(n, hs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, ratio};

    fn unit_box(dim: usize) -> ConvexCell {
        let mut hs = Vec::new();
        for i in 0..dim {
            hs.push(HalfSpace::from_affine(dim, move |x| x[i].clone(), true));
            hs.push(HalfSpace::from_affine(dim, move |x| int(1) - &x[i], true));
        }
        ConvexCell::new(dim, hs)
    }

    #[test]
    fn affine_coefficients() {
        let h = HalfSpace::from_affine(2, |x| &x[0] * int(2) - &x[1] + int(3), true);
        assert_eq!(h.normal, vec![int(-2), int(1)]);
        assert_eq!(h.offset, int(3));
        assert!(h.holds(&[int(0), int(0)]));
        assert!(!h.holds(&[int(-2), int(0)]));
    }

    #[test]
    fn box_membership_and_chords() {
        let b = unit_box(3);
        let half = ratio(1, 2);
        assert_eq!(
            b.locate(&[half.clone(), half.clone(), half.clone()]),
            Membership::InE
        );
        assert_eq!(
            b.locate(&[int(0), half.clone(), half.clone()]),
            Membership::OnBoundary
        );
        assert_eq!(
            b.locate(&[int(2), half.clone(), half.clone()]),
            Membership::Outside
        );
        let c = b.chord(
            &[int(-1), half.clone(), half.clone()],
            &[int(1), int(0), int(0)],
        );
        assert_eq!(c.lo.as_ref().unwrap().value, int(1));
        assert_eq!(c.hi.as_ref().unwrap().value, int(2));
        assert_eq!(c.sample(), Some(ratio(3, 2)));
        // grazing a face of an open box gives nothing
        let g = b.chord(&[int(-1), int(0), half.clone()], &[int(1), int(0), int(0)]);
        assert!(g.is_empty());
        // the closure is touched
        let g = b
            .closure()
            .chord(&[int(-1), int(0), half], &[int(1), int(0), int(0)]);
        assert!(!g.is_empty());
    }

    #[test]
    fn closed_end_point_interval() {
        let mut iv = Interval::everything();
        iv.raise_lo(int(1), true);
        iv.lower_hi(int(1), true);
        assert_eq!(iv.sample(), Some(int(1)));
        iv.lower_hi(int(1), false);
        assert!(iv.is_empty());
    }

    #[test]
    fn product_with_interval() {
        let sq = unit_box(2).times_interval(&int(1), &ratio(3, 2));
        assert_eq!(sq.dim, 3);
        assert!(sq.contains(&[ratio(1, 2), ratio(1, 2), ratio(5, 4)]));
        assert!(!sq.contains(&[ratio(1, 2), ratio(1, 2), int(1)]));
    }
}
