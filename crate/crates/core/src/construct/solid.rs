//! Prism scenes in ℝ³ and their products with an interval.

use num_traits::Zero;

use super::cut::{make_cut_scene_2d, CutMode, CutSceneSpec};
use crate::error::{Error, Result};
use crate::geom::{int, ConvexPoly, Scalar};
use crate::nd::{check_dimension, E3Scene, E3Variant, PrismScene, ProductScene};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E3Spec {
    pub cut: CutSceneSpec,
    /// The upward axis; its vertical component is the layer height ρ.
    pub axis: [Scalar; 3],
}

impl E3Spec {
    /// The default planar scene in lines mode with axis (2, 0, 2).
    pub fn bounded_default() -> Self {
        Self {
            cut: CutSceneSpec::standard(CutMode::Lines),
            axis: [int(2), int(0), int(2)],
        }
    }

    /// As above but with axis (5, 1, 2), which carries P clear of itself
    /// from one layer to the next.
    pub fn stacked_default() -> Self {
        Self {
            cut: CutSceneSpec::standard(CutMode::Lines),
            axis: [int(5), int(1), int(2)],
        }
    }
}

fn base_scene(spec: &E3Spec) -> Result<super::cut::CutScene> {
    if spec.cut.mode == CutMode::None {
        return Err(Error::InvalidConstruction(
            "the planar base must be cut (rays or lines)".into(),
        ));
    }
    make_cut_scene_2d(&spec.cut)
}

/// Mirror pair of oblique prism layers over the planar scene, closed by two
/// caps. Predicted trapped set: the two prisms over P.
pub fn make_e3_bounded(spec: &E3Spec) -> Result<PrismScene> {
    let base = base_scene(spec)?;
    Ok(PrismScene::E3(E3Scene::new(
        E3Variant::Bounded,
        base,
        spec.axis.clone(),
        1,
    )?))
}

/// Zig-zag stack of layers above a bottom cap, generated on demand up to
/// floor index `budget`. Predicted trapped set: the union of the prisms over
/// P.
pub fn make_e3_stacked(spec: &E3Spec, budget: usize) -> Result<PrismScene> {
    let (ok, why) = zigzag_check(&spec.cut.p, &spec.axis);
    if !ok {
        return Err(Error::InvalidConstruction(why));
    }
    let base = base_scene(spec)?;
    Ok(PrismScene::E3(E3Scene::new(
        E3Variant::Stacked,
        base,
        spec.axis.clone(),
        budget,
    )?))
}

/// The stacked prisms over P contain no ray: the two axes alternate and are
/// not parallel, and P is carried off itself by the horizontal shift, so a
/// vertical ray cannot stay in consecutive layers while any other ray
/// leaves the bounded horizontal range.
pub fn zigzag_check(p: &ConvexPoly, axis: &[Scalar; 3]) -> (bool, String) {
    let up = axis;
    let down = [axis[0].clone(), axis[1].clone(), -axis[2].clone()];
    let cross = [
        &up[1] * &down[2] - &up[2] * &down[1],
        &up[2] * &down[0] - &up[0] * &down[2],
        &up[0] * &down[1] - &up[1] * &down[0],
    ];
    if cross.iter().all(Zero::is_zero) {
        return (false, "the two floor axes are parallel".into());
    }
    let shifted = p.translate(&axis[0], &axis[1]);
    if !closures_disjoint(p, &shifted) {
        return (
            false,
            "P and its shift by the horizontal part of the axis overlap; a vertical ray stays trapped"
                .into(),
        );
    }
    (true, String::new())
}

/// Separating-axis test on closed convex polygons.
pub fn closures_disjoint(a: &ConvexPoly, b: &ConvexPoly) -> bool {
    let project = |q: &ConvexPoly, nx: &Scalar, ny: &Scalar| {
        let vals: Vec<Scalar> = q.vertices().iter().map(|v| &v.x * nx + &v.y * ny).collect();
        let lo = vals.iter().min().expect("vertices").clone();
        let hi = vals.iter().max().expect("vertices").clone();
        (lo, hi)
    };
    a.edges().chain(b.edges()).any(|(u, v)| {
        let (ex, ey) = v.minus(u);
        let (nx, ny) = (-ey, ex);
        let (alo, ahi) = project(a, &nx, &ny);
        let (blo, bhi) = project(b, &nx, &ny);
        ahi < blo || bhi < alo
    })
}

/// `E^{n-1} × (-1, 1)` with caps `D^{n-1} × (1, 3/2)` and its mirror, where
/// `D^{n-1}` is the convex hull of the inner scene. Predicted trapped set:
/// the inner prediction times `(-1, 1)`.
pub fn make_en_product(inner: PrismScene, n: usize) -> Result<PrismScene> {
    check_dimension(&inner, n)?;
    if let PrismScene::E3(e) = &inner {
        if e.variant == E3Variant::Stacked {
            return Err(Error::InvalidConstruction(
                "products need a bounded inner scene".into(),
            ));
        }
    }
    Ok(PrismScene::Product(ProductScene::new(inner)?))
}
