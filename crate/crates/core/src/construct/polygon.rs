use num_traits::One;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, int, ConvexPoly, Point2, Scalar};

/// Rational point on the unit circle with tan-half-angle `t`.
fn circle_point(t: &Scalar) -> Point2 {
    let t2 = t * t;
    let den = Scalar::one() + &t2;
    Point2::new((Scalar::one() - &t2) / &den, (t * int(2)) / den)
}

/// Convex hull of the points at angles 0, π and ±θ_j (j = 1..=k) on the unit
/// circle, where θ_1 = π/2 and θ_j decreases towards 0. The angles are
/// rational stand-ins: tan(θ_j / 2) = 2^(1-j).
pub fn make_generalized_polygon(k: usize) -> Result<ConvexPoly> {
    if k == 0 {
        return Err(Error::InvalidConstruction("k must be at least 1".into()));
    }
    let mut pts = vec![Point2::from_ints(1, 0), Point2::from_ints(-1, 0)];
    let mut t = Scalar::one();
    for _ in 0..k {
        pts.push(circle_point(&t));
        pts.push(circle_point(&-t.clone()));
        t /= int(2);
    }
    convex_hull(&pts)
}
