//! JSON scene documents. Rationals travel as strings so nothing is rounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::construct::{
    make_cut_scene_2d, make_e3_bounded, make_e3_stacked, make_en_product, make_generalized_polygon,
    CutMode, CutSceneSpec, E3Spec,
};
use crate::error::{Error, Result};
use crate::geom::{ConvexPoly, Point2, Scalar};
use crate::nd::{Prism, PrismList, PrismScene, TRange};
use crate::scene::Scene2;

pub const DOCUMENT_VERSION: u32 = 1;

/// An exact rational, written `"p/q"` with `q > 0` in lowest terms.
/// Integers (bare or quoted) are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(pub Scalar);

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Rat)
    }
}

pub fn parse_rational(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(Error::Parse(format!(
            "denominator must be positive in {s:?}"
        )));
    }
    Ok(Scalar::new(n, d))
}

/// Comma-separated rational coordinates, e.g. `1/2,-3`.
pub fn parse_point(s: &str) -> Result<Vec<Scalar>> {
    s.split(',').map(parse_rational).collect()
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(Scalar::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(Scalar::from_integer(v.into())))
            }
        }

        de.deserialize_any(RatVisitor)
    }
}

pub type PointDoc = [Rat; 2];
pub type PolygonDoc = Vec<PointDoc>;

fn poly_doc(q: &ConvexPoly) -> PolygonDoc {
    q.vertices()
        .iter()
        .map(|v| [Rat(v.x.clone()), Rat(v.y.clone())])
        .collect()
}

fn poly_from_doc(d: &PolygonDoc) -> Result<ConvexPoly> {
    ConvexPoly::new(
        d.iter()
            .map(|[x, y]| Point2::new(x.0.clone(), y.0.clone()))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutDoc {
    pub d: PolygonDoc,
    pub p: PolygonDoc,
    pub mode: CutMode,
    pub glue: Rat,
}

impl CutDoc {
    pub fn from_spec(s: &CutSceneSpec) -> Self {
        CutDoc {
            d: poly_doc(&s.d),
            p: poly_doc(&s.p),
            mode: s.mode,
            glue: Rat(s.glue.clone()),
        }
    }

    pub fn to_spec(&self) -> Result<CutSceneSpec> {
        Ok(CutSceneSpec {
            d: poly_from_doc(&self.d)?,
            p: poly_from_doc(&self.p)?,
            mode: self.mode,
            glue: self.glue.0.clone(),
        })
    }
}

/// A generator call that rebuilds a scene.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ConstructionDoc {
    CutScene(CutDoc),
    GeneralizedPolygon {
        k: usize,
    },
    E3Bounded {
        cut: CutDoc,
        axis: [Rat; 3],
    },
    E3Stacked {
        cut: CutDoc,
        axis: [Rat; 3],
        floor_budget: usize,
    },
    EnProduct {
        inner: Box<ConstructionDoc>,
        n: usize,
    },
}

impl ConstructionDoc {
    pub fn dim(&self) -> usize {
        match self {
            ConstructionDoc::CutScene(_) | ConstructionDoc::GeneralizedPolygon { .. } => 2,
            ConstructionDoc::E3Bounded { .. } | ConstructionDoc::E3Stacked { .. } => 3,
            ConstructionDoc::EnProduct { n, .. } => *n,
        }
    }

    fn e3_spec(cut: &CutDoc, axis: &[Rat; 3]) -> Result<E3Spec> {
        Ok(E3Spec {
            cut: cut.to_spec()?,
            axis: [axis[0].0.clone(), axis[1].0.clone(), axis[2].0.clone()],
        })
    }

    pub fn build_solid(&self) -> Result<PrismScene> {
        match self {
            ConstructionDoc::E3Bounded { cut, axis } => make_e3_bounded(&Self::e3_spec(cut, axis)?),
            ConstructionDoc::E3Stacked {
                cut,
                axis,
                floor_budget,
            } => make_e3_stacked(&Self::e3_spec(cut, axis)?, *floor_budget),
            ConstructionDoc::EnProduct { inner, n } => make_en_product(inner.build_solid()?, *n),
            _ => Err(Error::InvalidConstruction(
                "planar families do not build solids".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismDoc {
    pub base: PolygonDoc,
    pub z0: Rat,
    pub axis: [Rat; 3],
    pub t0: Rat,
    pub t1: Rat,
    pub t0_closed: bool,
    pub t1_closed: bool,
}

impl PrismDoc {
    pub fn to_prism(&self) -> Result<Prism> {
        Prism::new(
            poly_from_doc(&self.base)?,
            self.z0.0.clone(),
            [
                self.axis[0].0.clone(),
                self.axis[1].0.clone(),
                self.axis[2].0.clone(),
            ],
            TRange::new(
                self.t0.0.clone(),
                self.t1.0.clone(),
                self.t0_closed,
                self.t1_closed,
            ),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedDoc {
    pub polygons: Vec<PolygonDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub version: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polygons: Vec<PolygonDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prisms: Vec<PrismDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_trap: Option<PredictedDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A document turned into something the kernels can query.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum LoadedScene {
    Planar {
        scene: Scene2,
        predicted: Vec<ConvexPoly>,
    },
    Solid(PrismScene),
}

impl SceneDocument {
    pub fn planar(scene: &Scene2) -> Self {
        SceneDocument {
            version: DOCUMENT_VERSION,
            dim: 2,
            polygons: scene.polys().iter().map(poly_doc).collect(),
            construction: None,
            prisms: Vec::new(),
            predicted_trap: None,
            seed: None,
        }
    }

    pub fn with_prediction(mut self, polys: &[ConvexPoly]) -> Self {
        self.predicted_trap = Some(PredictedDoc {
            polygons: polys.iter().map(poly_doc).collect(),
        });
        self
    }

    pub fn solid(construction: ConstructionDoc) -> Self {
        SceneDocument {
            version: DOCUMENT_VERSION,
            dim: construction.dim(),
            polygons: Vec::new(),
            construction: Some(construction),
            prisms: Vec::new(),
            predicted_trap: None,
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SceneDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    fn validate(&self) -> Result<()> {
        if self.version != DOCUMENT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported document version {}",
                self.version
            )));
        }
        if self.dim < 2 {
            return Err(Error::Parse(format!(
                "dimension {} is not supported",
                self.dim
            )));
        }
        if let Some(c) = &self.construction {
            if c.dim() != self.dim {
                return Err(Error::Parse(format!(
                    "construction has dimension {} but the document says {}",
                    c.dim(),
                    self.dim
                )));
            }
        }
        if self.dim == 2 && !self.prisms.is_empty() {
            return Err(Error::Parse("prisms need dimension 3".into()));
        }
        if self.dim > 2 && !self.polygons.is_empty() {
            return Err(Error::Parse("polygons need dimension 2".into()));
        }
        if self.dim > 3 && self.construction.is_none() {
            return Err(Error::Parse(
                "dimensions above 3 need a construction".into(),
            ));
        }
        Ok(())
    }

    /// Builds the scene. Explicit polygons or prisms win over the
    /// construction they may have been generated from.
    pub fn load(&self) -> Result<LoadedScene> {
        self.validate()?;
        if self.dim == 2 {
            let predicted = self
                .predicted_trap
                .as_ref()
                .map(|p| {
                    p.polygons
                        .iter()
                        .map(poly_from_doc)
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?
                .unwrap_or_default();
            if !self.polygons.is_empty() || self.construction.is_none() {
                let polys = self
                    .polygons
                    .iter()
                    .map(poly_from_doc)
                    .collect::<Result<Vec<_>>>()?;
                return Ok(LoadedScene::Planar {
                    scene: Scene2::new(polys),
                    predicted,
                });
            }
            return match self.construction.as_ref().expect("checked above") {
                ConstructionDoc::CutScene(c) => {
                    let cs = make_cut_scene_2d(&c.to_spec()?)?;
                    let predicted = cs.predicted().into_iter().cloned().collect();
                    Ok(LoadedScene::Planar {
                        scene: cs.scene,
                        predicted,
                    })
                }
                ConstructionDoc::GeneralizedPolygon { k } => Ok(LoadedScene::Planar {
                    scene: Scene2::new(vec![make_generalized_polygon(*k)?]),
                    predicted,
                }),
                _ => unreachable!("dimension checked"),
            };
        }
        if !self.prisms.is_empty() {
            let prisms = self
                .prisms
                .iter()
                .map(PrismDoc::to_prism)
                .collect::<Result<Vec<_>>>()?;
            return Ok(LoadedScene::Solid(PrismScene::Prisms(PrismList::new(
                prisms,
            ))));
        }
        match &self.construction {
            Some(c) => Ok(LoadedScene::Solid(c.build_solid()?)),
            None => Err(Error::Parse(
                "a 3D document needs prisms or a construction".into(),
            )),
        }
    }
}

impl Rat {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, ratio};
    use crate::scene::unit_square;

    #[test]
    fn rationals_parse_and_print() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational(" 0/1 ").unwrap(), int(0));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(Rat(ratio(-2, 4)).to_string(), "-1/2");
        assert_eq!(Rat(int(3)).to_string(), "3/1");
        assert_eq!(parse_point("0/1,1/2").unwrap(), vec![int(0), ratio(1, 2)]);
    }

    #[test]
    fn schema_example_parses() {
        let text = r#"{"version":1,"dim":2,"polygons":[[["0/1","0/1"],["1/1","0/1"],["1/1","1/1"],["0/1","1/1"]]],"seed":42}"#;
        let doc = SceneDocument::from_json(text).unwrap();
        assert_eq!(doc.seed, Some(42));
        match doc.load().unwrap() {
            LoadedScene::Planar { scene, .. } => assert_eq!(scene.polys(), &[unit_square()]),
            LoadedScene::Solid(_) => panic!("expected a planar scene"),
        }
        // bare integers are fine too
        let text = r#"{"version":1,"dim":2,"polygons":[[[0,0],[1,0],[1,1],[0,1]]]}"#;
        assert!(SceneDocument::from_json(text).is_ok());
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(SceneDocument::from_json("{").is_err());
        assert!(SceneDocument::from_json(r#"{"version":2,"dim":2}"#).is_err());
        assert!(
            SceneDocument::from_json(r#"{"version":1,"dim":2,"polygons":[[["1/0","0"]]]}"#)
                .is_err()
        );
        // clockwise polygon
        let cw = r#"{"version":1,"dim":2,"polygons":[[[0,0],[0,1],[1,1],[1,0]]]}"#;
        assert!(SceneDocument::from_json(cw).unwrap().load().is_err());
    }

    #[test]
    fn construction_round_trip() {
        let c = ConstructionDoc::EnProduct {
            inner: Box::new(ConstructionDoc::E3Bounded {
                cut: CutDoc::from_spec(&CutSceneSpec::standard(CutMode::Lines)),
                axis: [Rat(int(2)), Rat(int(0)), Rat(int(2))],
            }),
            n: 4,
        };
        let doc = SceneDocument::solid(c);
        let back = SceneDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(matches!(back.load().unwrap(), LoadedScene::Solid(s) if s.dim() == 4));
    }
}
