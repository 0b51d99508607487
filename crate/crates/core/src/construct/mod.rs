//! Generators for the example families, each paired with its predicted
//! trapped set.

mod cut;
mod polygon;
mod solid;

pub use cut::{make_cut_scene_2d, random_cut_scene, CutMode, CutScene, CutSceneSpec, Removed};
pub use polygon::make_generalized_polygon;
pub use solid::{
    closures_disjoint, make_e3_bounded, make_e3_stacked, make_en_product, zigzag_check, E3Spec,
};
