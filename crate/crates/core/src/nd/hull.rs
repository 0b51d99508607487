//! Exact convex hulls of small point sets in ℝ³.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::cell::{dot, ConvexCell, HalfSpace, PointN};
use crate::error::{Error, Result};
use crate::geom::{convex_hull, int, Point2, Scalar};

fn sub(a: &[Scalar], b: &[Scalar]) -> PointN {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[Scalar], b: &[Scalar]) -> PointN {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Scales a plane `normal · x = offset` so that the first nonzero normal
/// component is ±1 with the given outward sign preserved.
fn canonical(normal: PointN, offset: Scalar) -> (PointN, Scalar) {
    let lead = normal
        .iter()
        .find(|c| !c.is_zero())
        .expect("nonzero normal")
        .abs();
    (normal.iter().map(|c| c / &lead).collect(), offset / lead)
}

#[derive(Clone, Debug)]
pub struct Hull3 {
    /// Outward facet planes; the open hull is `normal · x < offset` for all.
    pub facets: Vec<(PointN, Scalar)>,
    pub vertices: Vec<PointN>,
    pub volume: Scalar,
}

impl Hull3 {
    pub fn cell(&self) -> ConvexCell {
        ConvexCell::new(
            3,
            self.facets
                .iter()
                .map(|(n, c)| HalfSpace {
                    normal: n.clone(),
                    offset: c.clone(),
                    strict: true,
                })
                .collect(),
        )
    }
}

/// Facets by brute force over point triples; meant for a few dozen points.
pub fn hull3(points: &[PointN]) -> Result<Hull3> {
    let pts: Vec<PointN> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = pts.len();
    let mut facets: BTreeMap<(PointN, Scalar), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let nrm = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                if nrm.iter().all(Zero::is_zero) {
                    continue;
                }
                let off = dot(&nrm, &pts[i]);
                let (mut pos, mut neg) = (false, false);
                for p in &pts {
                    let s = dot(&nrm, p) - &off;
                    pos |= s.is_positive();
                    neg |= s.is_negative();
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                if !pos && !neg {
                    return Err(Error::Degenerate("coplanar point set".into()));
                }
                let (nrm, off) = if pos {
                    (nrm.iter().map(|c| -c).collect(), -off)
                } else {
                    (nrm, off)
                };
                let key = canonical(nrm, off);
                facets.entry(key).or_default().extend([i, j, k]);
            }
        }
    }
    if facets.len() < 4 {
        return Err(Error::Degenerate("hull has fewer than four facets".into()));
    }
    // complete each facet's point set (coplanar points beyond the triple)
    let mut volume = Scalar::zero();
    let centre: PointN = (0..3)
        .map(|c| {
            pts.iter()
                .map(|p| p[c].clone())
                .fold(Scalar::zero(), |a, b| a + b)
                / int(n as i64)
        })
        .collect();
    let mut verts = BTreeSet::new();
    for ((nrm, off), members) in &facets {
        let on: Vec<usize> = (0..n).filter(|&m| dot(nrm, &pts[m]) == *off).collect();
        debug_assert!(members.iter().all(|m| on.contains(m)));
        // order the facet polygon in the coordinate plane it projects onto
        // best, then fan it from the centre
        let drop = (0..3).max_by_key(|&c| nrm[c].abs()).expect("three axes");
        let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
        let flat: Vec<Point2> = on
            .iter()
            .map(|&m| Point2::new(pts[m][keep[0]].clone(), pts[m][keep[1]].clone()))
            .collect();
        let ring = convex_hull(&flat)?;
        let ring: Vec<&PointN> = ring
            .vertices()
            .iter()
            .map(|v| &pts[on[flat.iter().position(|f| f == v).expect("hull vertex")]])
            .collect();
        for w in 1..ring.len() - 1 {
            let a = sub(ring[0], &centre);
            let b = sub(ring[w], &centre);
            let c = sub(ring[w + 1], &centre);
            volume += dot(&a, &cross(&b, &c)).abs() / int(6);
        }
        verts.extend(ring.into_iter().cloned());
    }
    Ok(Hull3 {
        facets: facets.into_keys().collect(),
        vertices: verts.into_iter().collect(),
        volume,
    })
}
