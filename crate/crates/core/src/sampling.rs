//! Deterministic rational sampling helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{int, ConvexPoly, Dir2, Location, Point2, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Denominator used for random rational coordinates.
pub const GRID: i64 = 1 << 20;

/// Uniform rational in `[lo, hi]` on a grid of `GRID` steps.
pub fn rational_between(rng: &mut SampleRng, lo: &Scalar, hi: &Scalar) -> Scalar {
    let k: i64 = rng.gen_range(0..=GRID);
    lo + (hi - lo) * Scalar::new(BigInt::from(k), BigInt::from(GRID))
}

/// Rejection-sampled rational point in the open polygon.
pub fn point_in_poly(rng: &mut SampleRng, q: &ConvexPoly) -> Point2 {
    let b = q.bbox();
    loop {
        let p = Point2::new(
            rational_between(rng, &b.min.x, &b.max.x),
            rational_between(rng, &b.min.y, &b.max.y),
        );
        if q.locate(&p) == Location::Interior {
            return p;
        }
    }
}

/// The `i`-th of `n` directions spread evenly along the perimeter of the
/// square `[-1,1]²`, counterclockwise from `(1,-1)`. `n` must be a multiple
/// of 8.
pub fn square_lattice_direction(i: u64, n: u64) -> Dir2 {
    debug_assert!(n.is_multiple_of(8) && i < n);
    let u = Scalar::new(BigInt::from(8 * i), BigInt::from(n));
    let side = (&u / int(2)).floor().to_integer();
    let f = &u - Scalar::from_integer(&side * 2) - int(1);
    let one = int(1);
    let (dx, dy) = match side.mod_floor(&BigInt::from(4)).to_string().as_str() {
        "0" => (one, f),
        "1" => (-f, one),
        "2" => (-one, -f),
        _ => (f, -one),
    };
    Dir2::new(&dx, &dy).expect("perimeter point is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio;

    #[test]
    fn lattice_is_strictly_increasing_in_angle() {
        let n = 64;
        let ds: Vec<Dir2> = (0..n).map(|i| square_lattice_direction(i, n)).collect();
        assert_eq!(ds[0], Dir2::from_ints(1, -1));
        assert_eq!(ds[8], Dir2::from_ints(1, 0));
        assert_eq!(ds[16], Dir2::from_ints(1, 1));
        assert_eq!(ds[4], Dir2::from_ints(2, -1));
        for w in ds.windows(2) {
            assert!(w[0].cross(&w[1]) > BigInt::from(0));
        }
    }

    #[test]
    fn points_fall_inside() {
        let q = crate::scene::unit_square();
        let mut r = rng(7);
        for _ in 0..50 {
            let p = point_in_poly(&mut r, &q);
            assert_eq!(q.locate(&p), Location::Interior);
        }
        let a = rational_between(&mut rng(1), &int(0), &ratio(1, 2));
        assert!(a >= int(0) && a <= ratio(1, 2));
    }
}
