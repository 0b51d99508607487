//! Scene documents and rendering.

mod doc;
mod svg;

pub use doc::{
    parse_point, parse_rational, ConstructionDoc, CutDoc, LoadedScene, PredictedDoc, PrismDoc, Rat,
    SceneDocument, DOCUMENT_VERSION,
};
pub use svg::{fmt_decimal, render_svg, SvgStyle};
