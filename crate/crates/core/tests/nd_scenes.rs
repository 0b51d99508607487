use num_traits::Zero;
use wconvex::construct::{make_e3_bounded, make_e3_stacked, make_en_product, E3Spec};
use wconvex::geom::{int, ratio, Scalar};
use wconvex::nd::{classify_point_nd, NdClassification, PointN, PrismScene, Route, Slice};
use wconvex::sampling::{rational_between, rng};
use wconvex::scene::Membership;
use wconvex::Error;

fn v(xs: &[Scalar]) -> PointN {
    xs.to_vec()
}

fn bounded() -> PrismScene {
    make_e3_bounded(&E3Spec::bounded_default()).unwrap()
}

/// The centroid (0, 1/3) of P lifted halfway up the upper prism over P.
fn upper_p_point() -> PointN {
    v(&[int(1), ratio(1, 3), int(1)])
}

#[test]
fn march_lateral_cap_and_recursion() {
    let s = bounded();
    let y = upper_p_point();
    assert_eq!(s.predicted_locate(&y).unwrap(), Membership::InE);

    let w = s
        .blocked_witness(&y, &v(&[int(1), int(0), int(0)]))
        .unwrap()
        .unwrap();
    assert_eq!(w.route, Route::Lateral { floor: 1 });
    assert_eq!(w.floors, 1);
    assert_eq!(s.contains(&w.point).unwrap(), Membership::InE);

    let w = s
        .blocked_witness(&y, &v(&[int(0), int(0), int(1)]))
        .unwrap()
        .unwrap();
    assert_eq!(w.route, Route::Cap);
    assert!(w.point[2] > int(2));

    // down through the shared base, then out of the lower prism sideways
    let w = s
        .blocked_witness(&y, &v(&[int(-1), int(0), int(-1)]))
        .unwrap()
        .unwrap();
    assert_eq!(w.route, Route::Lateral { floor: 0 });
    assert_eq!(w.floors, 2);
    assert!(w.point[2] < int(0));
}

#[test]
fn bounded_classification_examples() {
    let s = bounded();
    let y = upper_p_point();
    match classify_point_nd(&s, &y, 256, 3).unwrap() {
        NdClassification::EvidenceTrapped { samples, witnesses } => {
            assert_eq!(samples, 256);
            assert_eq!(witnesses.len(), 256);
        }
        other => panic!("{other}"),
    }
    let inside = v(&[int(3), int(3), ratio(1, 2)]);
    assert_eq!(
        classify_point_nd(&s, &inside, 16, 0).unwrap(),
        NdClassification::InE
    );
    // above the top cap: empty slice
    let above = v(&[int(0), int(0), int(10)]);
    assert!(matches!(
        classify_point_nd(&s, &above, 16, 0).unwrap(),
        NdClassification::CertifiedFree { .. }
    ));
}

#[test]
fn beside_the_cap_uses_the_convex_slice() {
    let s = bounded();
    let y = v(&[int(9), int(0), ratio(5, 2)]);
    assert!(matches!(
        s.horizontal_slice(&y[2]).unwrap(),
        Slice::Convex(_)
    ));
    let line = s.escape_via_slice(&y).unwrap().unwrap();
    assert!(line[2].is_zero());
    assert!(s.line_misses(&y, &line).unwrap());
}

#[test]
fn predicted_points_have_no_slice_escape() {
    let s = bounded();
    let mut r = rng(11);
    for _ in 0..20 {
        let y = s.sample_predicted(&mut r).unwrap();
        assert_eq!(s.escape_via_slice(&y).unwrap(), None);
    }
}

#[test]
fn slice_escape_agrees_with_direct_rays() {
    let s = bounded();
    let (lo, hi) = s.sample_box().unwrap();
    let mut r = rng(5);
    let mut escapes = 0;
    for _ in 0..500 {
        let y: PointN = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| rational_between(&mut r, a, b))
            .collect();
        if s.contains(&y).unwrap() != Membership::Outside {
            continue;
        }
        if let Some(line) = s.escape_via_slice(&y).unwrap() {
            escapes += 1;
            let back: PointN = line.iter().map(|c| -c).collect();
            assert_eq!(s.blocked_witness(&y, &line).unwrap(), None);
            assert_eq!(s.blocked_witness(&y, &back).unwrap(), None);
        }
    }
    assert!(escapes > 50);
}

/// Lifted centroid of P near the top of the lowest stacked floor.
fn stacked_low_point() -> PointN {
    // (0, 1/3) + (1/8)(5, 1), at height -ρ/8
    v(&[ratio(5, 8), ratio(11, 24), ratio(-1, 4)])
}

#[test]
fn stacked_budget_examples() {
    let up = v(&[int(0), int(0), int(1)]);
    let y = stacked_low_point();
    let tight = make_e3_stacked(&E3Spec::stacked_default(), 0).unwrap();
    assert_eq!(tight.predicted_locate(&y).unwrap(), Membership::InE);
    assert!(matches!(
        tight.blocked_witness(&y, &up),
        Err(Error::BudgetExhausted { budget: 0 })
    ));
    assert!(matches!(
        classify_point_nd(&tight, &y, 8, 0).unwrap(),
        NdClassification::Inconclusive { .. }
    ));
    // sideways needs no other floor
    let w = tight
        .blocked_witness(&y, &v(&[int(1), int(0), int(0)]))
        .unwrap()
        .unwrap();
    assert_eq!(w.route, Route::Lateral { floor: 0 });

    let roomy = make_e3_stacked(&E3Spec::stacked_default(), 6).unwrap();
    for d in [
        up.clone(),
        v(&[int(1), int(0), int(8)]),
        v(&[int(-1), int(1), int(16)]),
    ] {
        let w = roomy.blocked_witness(&y, &d).unwrap().unwrap();
        assert!(w.floors <= 3, "{} floors", w.floors);
        assert_eq!(roomy.contains(&w.point).unwrap(), Membership::InE);
    }
}

#[test]
fn stacked_floors_are_lazy() {
    let s = make_e3_stacked(&E3Spec::stacked_default(), 8).unwrap();
    let PrismScene::E3(e) = &s else {
        unreachable!()
    };
    assert_eq!(e.floors_built(), 0);
    let y = stacked_low_point();
    s.blocked_witness(&y, &v(&[int(0), int(0), int(1)]))
        .unwrap();
    assert!(e.floors_built() <= 4);
    // high floors are still there when asked for
    let high = v(&[int(0), int(0), int(15)]);
    assert!(s.contains(&high).is_ok());
    assert!(e.floors_built() >= 8);
}

#[test]
fn product_examples() {
    let p = make_en_product(bounded(), 4).unwrap();
    let mut y = upper_p_point();
    y.push(ratio(1, 3));
    assert_eq!(p.predicted_locate(&y).unwrap(), Membership::InE);
    assert!(matches!(
        classify_point_nd(&p, &y, 64, 1).unwrap(),
        NdClassification::EvidenceTrapped { samples: 64, .. }
    ));
    // inside a cap
    let cap = v(&[int(2), int(0), int(0), ratio(5, 4)]);
    assert_eq!(p.contains(&cap).unwrap(), Membership::InE);
    // at cap height but outside its shadow
    let beside = v(&[int(20), int(0), int(0), ratio(5, 4)]);
    match classify_point_nd(&p, &beside, 16, 0).unwrap() {
        NdClassification::CertifiedFree { line } => {
            assert!(line[3].is_zero());
            assert!(p.line_misses(&beside, &line).unwrap());
        }
        other => panic!("{other}"),
    }
    // five dimensions nest the same way
    let p5 = make_en_product(p, 5).unwrap();
    let mut y5 = y.clone();
    y5.push(ratio(-1, 2));
    assert_eq!(p5.predicted_locate(&y5).unwrap(), Membership::InE);
    assert!(matches!(
        classify_point_nd(&p5, &y5, 32, 1).unwrap(),
        NdClassification::EvidenceTrapped { .. }
    ));
}
