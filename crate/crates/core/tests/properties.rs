use num_traits::{Signed, Zero};
use proptest::prelude::*;
use wconvex::arcs::{Arc, ArcSet};
use wconvex::geom::{
    convex_hull, int, orient, ratio, ConvexPoly, Dir2, Location, Point2, Ray2, Scalar,
};
use wconvex::io::{LoadedScene, Rat, SceneDocument};
use wconvex::scene::{square, Scene2};
use wconvex::trap::{blocked_arcs, classify_point, Classification};

fn dir() -> impl Strategy<Value = Dir2> {
    (-12i64..=12, -12i64..=12)
        .prop_filter("nonzero", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| Dir2::from_ints(x, y))
}

fn arc() -> impl Strategy<Value = Arc> {
    (dir(), dir())
        .prop_filter("distinct ends", |(a, b)| a != b)
        .prop_map(|(a, b)| Arc::new(a, b))
}

fn arcset() -> impl Strategy<Value = ArcSet> {
    prop::collection::vec(arc(), 0..4).prop_map(ArcSet::from_arcs)
}

fn point(range: i64) -> impl Strategy<Value = Point2> {
    (-range * 4..=range * 4, -range * 4..=range * 4)
        .prop_map(|(x, y)| Point2::new(ratio(x, 4), ratio(y, 4)))
}

fn poly() -> impl Strategy<Value = ConvexPoly> {
    prop::collection::vec(point(6), 3..8)
        .prop_filter_map("degenerate hull", |pts| convex_hull(&pts).ok())
}

/// Slab test against the open square `c ± h`, written independently of the
/// polygon kernel.
fn ray_meets_open_square(y: &Point2, d: &Dir2, c: &Point2, h: &Scalar) -> bool {
    let mut lo = Scalar::zero();
    let mut hi: Option<Scalar> = None;
    for (o, v, m) in [(&y.x, d.dx(), &c.x), (&y.y, d.dy(), &c.y)] {
        let (a, b) = (m - h, m + h);
        if v.is_zero() {
            if !(&a < o && o < &b) {
                return false;
            }
            continue;
        }
        let (t1, t2) = ((&a - o) / &v, (&b - o) / &v);
        let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        lo = lo.max(t1);
        hi = Some(hi.map_or(t2.clone(), |x: Scalar| x.min(t2)));
    }
    hi.is_none_or(|hi| lo < hi)
}

proptest! {
    #[test]
    fn union_is_commutative_and_pointwise(a in arcset(), b in arcset(), d in dir()) {
        let u = a.union(&b);
        prop_assert_eq!(&u, &b.union(&a));
        prop_assert_eq!(u.contains(&d), a.contains(&d) || b.contains(&d));
        prop_assert_eq!(u.union(&u), u.clone());
    }

    #[test]
    fn union_is_associative(a in arcset(), b in arcset(), c in arcset()) {
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
    }

    #[test]
    fn symmetrization_adds_opposites(a in arcset(), d in dir()) {
        let s = a.antipodal_symmetrize();
        prop_assert_eq!(s.contains(&d), a.contains(&d) || a.contains(&d.neg()));
    }

    #[test]
    fn complement_representative_is_uncovered(a in arcset()) {
        match a.complement_representative() {
            Some(d) => prop_assert!(!a.contains(&d)),
            None => prop_assert!(a.is_full()),
        }
    }

    #[test]
    fn orientation_is_antisymmetric_and_cyclic(a in point(5), b in point(5), c in point(5)) {
        let o = orient(&a, &b, &c).as_i8();
        prop_assert_eq!(orient(&b, &a, &c).as_i8(), -o);
        prop_assert_eq!(orient(&b, &c, &a).as_i8(), o);
        prop_assert_eq!(orient(&a, &c, &b).as_i8(), -o);
    }

    #[test]
    fn directions_normalize_by_positive_scale(x in -20i64..=20, y in -20i64..=20, k in 1i64..=9) {
        prop_assume!(x != 0 || y != 0);
        prop_assert_eq!(Dir2::from_ints(k * x, k * y), Dir2::from_ints(x, y));
        prop_assert_ne!(Dir2::from_ints(-x, -y), Dir2::from_ints(x, y));
    }

    #[test]
    fn ray_hits_match_slab_oracle(y in point(6), d in dir(), c in point(4), h in 1i64..=8) {
        let h = ratio(h, 4);
        let sq = square(&c, &h);
        let s = Scene2::new(vec![sq]);
        let expected = ray_meets_open_square(&y, &d, &c, &h);
        prop_assert_eq!(s.ray_hits(&Ray2::new(y.clone(), d.clone())), expected);
        if s.contains(&y) == wconvex::scene::Membership::Outside {
            prop_assert_eq!(blocked_arcs(&s, &y).contains(&d), expected);
        }
    }

    #[test]
    fn classification_witnesses_hold(ps in prop::collection::vec(poly(), 1..4), y in point(7)) {
        let s = Scene2::new(ps);
        match classify_point(&s, &y) {
            Classification::Free { line } => {
                prop_assert!(!s.line_hits(&wconvex::geom::Line2::new(y.clone(), line)));
            }
            Classification::TrappedLinesOnly { ray } => {
                prop_assert!(!s.ray_hits(&Ray2::new(y.clone(), ray)));
            }
            Classification::TrappedBoth => {
                prop_assert!(blocked_arcs(&s, &y).is_full());
                // trapped points lie inside the hull of the scene
                let hull = convex_hull(&s.vertices()).unwrap();
                prop_assert_eq!(hull.locate(&y), Location::Interior);
            }
            Classification::InE | Classification::OnBoundaryE => {
                prop_assert!(s.polys().iter().any(|q| q.locate(&y) != Location::Outside));
            }
        }
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = Rat(ratio(n, d));
        let back: Rat = r.to_string().parse().unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert!(r.0.denom().is_positive());
    }

    #[test]
    fn documents_round_trip(ps in prop::collection::vec(poly(), 0..4), seed in any::<u64>()) {
        let scene = Scene2::new(ps);
        let mut doc = SceneDocument::planar(&scene);
        doc.seed = Some(seed);
        let back = SceneDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        match back.load().unwrap() {
            LoadedScene::Planar { scene: s, .. } => prop_assert_eq!(s.polys(), scene.polys()),
            LoadedScene::Solid(_) => prop_assert!(false, "planar document loaded as a solid"),
        }
    }
}

#[test]
fn slab_oracle_sanity() {
    let c = Point2::from_ints(0, 0);
    let y = Point2::from_ints(-3, 0);
    assert!(ray_meets_open_square(
        &y,
        &Dir2::from_ints(1, 0),
        &c,
        &int(1)
    ));
    assert!(!ray_meets_open_square(
        &y,
        &Dir2::from_ints(-1, 0),
        &c,
        &int(1)
    ));
    // grazing the top edge stays outside the open square
    let y = Point2::from_ints(-3, 1);
    assert!(!ray_meets_open_square(
        &y,
        &Dir2::from_ints(1, 0),
        &c,
        &int(1)
    ));
    // through a corner only
    let y = Point2::from_ints(-2, 0);
    assert!(!ray_meets_open_square(
        &y,
        &Dir2::from_ints(1, 1),
        &c,
        &int(1)
    ));
}
