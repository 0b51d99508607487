//! Exact rational planar kernel.
//!
//! Everything here is computed in arbitrary-precision rationals. Distances are
//! compared through squared or ℓ∞ quantities, so no predicate ever needs a
//! square root and no floating point enters a decision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half() -> Scalar {
    ratio(1, 2)
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    /// `self + t * d`.
    pub fn along(&self, d: &Dir2, t: &Scalar) -> Point2 {
        Point2::new(&self.x + t * d.dx(), &self.y + t * d.dy())
    }

    pub fn offset(&self, dx: &Scalar, dy: &Scalar) -> Point2 {
        Point2::new(&self.x + dx, &self.y + dy)
    }

    pub fn minus(&self, other: &Point2) -> (Scalar, Scalar) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    pub fn dir_to(&self, other: &Point2) -> Option<Dir2> {
        let (dx, dy) = other.minus(self);
        Dir2::new(&dx, &dy)
    }

    pub fn midpoint(&self, other: &Point2) -> Point2 {
        let h = half();
        Point2::new((&self.x + &other.x) * &h, (&self.y + &other.y) * &h)
    }

    /// Point on segment `self..other` at parameter `t` (0 at self, 1 at other).
    pub fn lerp(&self, other: &Point2, t: &Scalar) -> Point2 {
        Point2::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }

    pub fn linf_dist(&self, other: &Point2) -> Scalar {
        let dx = (&self.x - &other.x).abs();
        let dy = (&self.y - &other.y).abs();
        dx.max(dy)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }
}

/// `(b - a) x (c - a)`.
pub fn cross3(a: &Point2, b: &Point2, c: &Point2) -> Scalar {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Orientation {
    let l = (&b.x - &a.x) * (&c.y - &a.y);
    let r = (&b.y - &a.y) * (&c.x - &a.x);
    Orientation::from_ordering(l.cmp(&r))
}

/// A direction in the plane, stored as a primitive integer vector.
///
/// Two directions compare equal iff they are positive multiples of each other.
/// The total order is the counterclockwise angle measured from `+x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dir2 {
    dx: BigInt,
    dy: BigInt,
}

impl Dir2 {
    pub fn new(dx: &Scalar, dy: &Scalar) -> Option<Dir2> {
        if dx.is_zero() && dy.is_zero() {
            return None;
        }
        let l = dx.denom().lcm(dy.denom());
        let ix = dx.numer() * (&l / dx.denom());
        let iy = dy.numer() * (&l / dy.denom());
        Some(Self::from_big(ix, iy))
    }

    /// Panics on the zero vector.
    pub fn from_ints(dx: i64, dy: i64) -> Dir2 {
        assert!(dx != 0 || dy != 0, "zero direction");
        Self::from_big(BigInt::from(dx), BigInt::from(dy))
    }

    pub(crate) fn from_big(ix: BigInt, iy: BigInt) -> Dir2 {
        debug_assert!(!(ix.is_zero() && iy.is_zero()));
        let g = ix.gcd(&iy);
        Dir2 {
            dx: ix / &g,
            dy: iy / &g,
        }
    }

    pub fn dx(&self) -> Scalar {
        Scalar::from_integer(self.dx.clone())
    }

    pub fn dy(&self) -> Scalar {
        Scalar::from_integer(self.dy.clone())
    }

    pub fn dx_int(&self) -> &BigInt {
        &self.dx
    }

    pub fn dy_int(&self) -> &BigInt {
        &self.dy
    }

    pub fn neg(&self) -> Dir2 {
        Dir2 {
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    pub fn cross(&self, other: &Dir2) -> BigInt {
        &self.dx * &other.dy - &self.dy * &other.dx
    }

    pub fn dot(&self, other: &Dir2) -> BigInt {
        &self.dx * &other.dx + &self.dy * &other.dy
    }

    /// Vector sum, `None` when the two directions are antipodal.
    pub fn sum(&self, other: &Dir2) -> Option<Dir2> {
        let x = &self.dx + &other.dx;
        let y = &self.dy + &other.dy;
        if x.is_zero() && y.is_zero() {
            None
        } else {
            Some(Self::from_big(x, y))
        }
    }

    /// Rotation taking `base` to `+x`, applied to `self` (scaled by |base|).
    pub(crate) fn relative_to(&self, base: &Dir2) -> (BigInt, BigInt) {
        (base.dot(self), base.cross(self))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.dx.to_f64().unwrap_or(f64::NAN),
            self.dy.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for Dir2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

fn raw_half(x: &BigInt, y: &BigInt) -> u8 {
    if y.is_positive() || (y.is_zero() && x.is_positive()) {
        0
    } else {
        1
    }
}

/// Angular comparison of two raw (nonzero) integer vectors.
pub(crate) fn raw_angle_cmp(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> Ordering {
    let ha = raw_half(&a.0, &a.1);
    let hb = raw_half(&b.0, &b.1);
    ha.cmp(&hb).then_with(|| {
        let c = &a.0 * &b.1 - &a.1 * &b.0;
        // positive cross: a comes first
        0.cmp(&c.signum().to_i8().unwrap_or(0))
    })
}

/// Cyclic order on directions, starting at `+x` and running counterclockwise.
pub fn dir_cmp(u: &Dir2, v: &Dir2) -> Ordering {
    raw_angle_cmp(&(u.dx.clone(), u.dy.clone()), &(v.dx.clone(), v.dy.clone()))
}

impl Ord for Dir2 {
    fn cmp(&self, other: &Self) -> Ordering {
        let ha = raw_half(&self.dx, &self.dy);
        let hb = raw_half(&other.dx, &other.dy);
        ha.cmp(&hb).then_with(|| match self.cross(other).sign() {
            num_bigint::Sign::Plus => Ordering::Less,
            num_bigint::Sign::Minus => Ordering::Greater,
            num_bigint::Sign::NoSign => Ordering::Equal,
        })
    }
}

impl PartialOrd for Dir2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray2 {
    pub origin: Point2,
    pub dir: Dir2,
}

impl Ray2 {
    pub fn new(origin: Point2, dir: Dir2) -> Self {
        Self { origin, dir }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line2 {
    pub origin: Point2,
    pub dir: Dir2,
}

impl Line2 {
    pub fn new(origin: Point2, dir: Dir2) -> Self {
        Self { origin, dir }
    }

    pub fn equation(&self) -> LineEq {
        let other = self.origin.along(&self.dir, &Scalar::one());
        LineEq::through(&self.origin, &other).expect("distinct points")
    }
}

/// Canonical implicit line `a x + b y = c` with coprime integer coefficients
/// and the first nonzero of `(a, b)` positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineEq {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl LineEq {
    pub fn through(p: &Point2, q: &Point2) -> Option<LineEq> {
        if p == q {
            return None;
        }
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &a * &p.x + &b * &p.y;
        Some(Self::canonical(a, b, c))
    }

    fn canonical(a: Scalar, b: Scalar, c: Scalar) -> LineEq {
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let ia = a.numer() * (&l / a.denom());
        let ib = b.numer() * (&l / b.denom());
        let ic = c.numer() * (&l / c.denom());
        let mut g = ia.gcd(&ib).gcd(&ic);
        if ia.is_negative() || (ia.is_zero() && ib.is_negative()) {
            g = -g;
        }
        LineEq {
            a: Scalar::from_integer(ia / &g),
            b: Scalar::from_integer(ib / &g),
            c: Scalar::from_integer(ic / &g),
        }
    }

    /// `a x + b y - c`; its sign tells the side of `p`.
    pub fn eval(&self, p: &Point2) -> Scalar {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.eval(p).is_zero()
    }

    pub fn intersection(&self, other: &LineEq) -> Option<Point2> {
        let det = &self.a * &other.b - &other.a * &self.b;
        if det.is_zero() {
            return None;
        }
        let x = (&self.c * &other.b - &other.c * &self.b) / &det;
        let y = (&self.a * &other.c - &other.a * &self.c) / &det;
        Some(Point2::new(x, y))
    }

    /// Parameter `t` at which `origin + t * dir` meets the line, if it
    /// crosses it at a single point.
    pub fn crossing_param(
        &self,
        origin: &Point2,
        dir_x: &Scalar,
        dir_y: &Scalar,
    ) -> Option<Scalar> {
        let denom = &self.a * dir_x + &self.b * dir_y;
        if denom.is_zero() {
            return None;
        }
        Some(-self.eval(origin) / denom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn new(min: Point2, max: Point2) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y);
        Self { min, max }
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a Point2>) -> Option<Aabb> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for p in it {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        Some(Aabb::new(lo, hi))
    }

    /// Grows every side by `fraction` of the extent on that axis (or by
    /// `fraction` itself when the extent is zero).
    pub fn with_margin(&self, fraction: &Scalar) -> Aabb {
        let pad = |lo: &Scalar, hi: &Scalar| {
            let ext = hi - lo;
            if ext.is_zero() {
                fraction.clone()
            } else {
                ext * fraction
            }
        };
        let px = pad(&self.min.x, &self.max.x);
        let py = pad(&self.min.y, &self.max.y);
        Aabb::new(
            Point2::new(&self.min.x - &px, &self.min.y - &py),
            Point2::new(&self.max.x + &px, &self.max.y + &py),
        )
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb::from_points([&self.min, &self.max, &other.min, &other.max]).expect("nonempty")
    }

    pub fn contains_strict(&self, p: &Point2) -> bool {
        self.min.x < p.x && p.x < self.max.x && self.min.y < p.y && p.y < self.max.y
    }

    pub fn width(&self) -> Scalar {
        &self.max.x - &self.min.x
    }

    pub fn height(&self) -> Scalar {
        &self.max.y - &self.min.y
    }

    pub fn to_poly(&self) -> ConvexPoly {
        ConvexPoly::new_unchecked(vec![
            self.min.clone(),
            Point2::new(self.max.x.clone(), self.min.y.clone()),
            self.max.clone(),
            Point2::new(self.min.x.clone(), self.max.y.clone()),
        ])
    }
}

/// A strictly convex polygon with counterclockwise vertices. Interpreted as an
/// open set unless a caller says otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPoly {
    vertices: Vec<Point2>,
}

impl ConvexPoly {
    /// Validates: at least three vertices, no repeats, every turn strictly left.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            let a = &vertices[(i + n - 1) % n];
            let b = &vertices[i];
            let c = &vertices[(i + 1) % n];
            if orient(a, b, c) != Orientation::CounterClockwise {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {i} at {b} is not a strict left turn"
                )));
            }
        }
        // Strict left turns everywhere still admit a polygon winding twice.
        let mut total = 0;
        for i in 0..n {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % n];
            if (q.y > p.y) != (vertices[(i + 2) % n].y > q.y) {
                total += 1;
            }
        }
        if total > 2 {
            return Err(Error::InvalidPolygon(
                "vertex ring winds more than once".into(),
            ));
        }
        Ok(Self { vertices })
    }

    /// Canonicalizes an arbitrary ring: drops repeated and collinear
    /// vertices, and reverses a clockwise ring.
    pub fn from_ring(points: Vec<Point2>) -> Result<Self> {
        let mut pts: Vec<Point2> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        let mut changed = true;
        while changed && pts.len() >= 3 {
            changed = false;
            let n = pts.len();
            for i in 0..n {
                let a = &pts[(i + n - 1) % n];
                let c = &pts[(i + 1) % n];
                if orient(a, &pts[i], c) == Orientation::Collinear {
                    pts.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        if pts.len() < 3 {
            return Err(Error::InvalidPolygon("ring is degenerate".into()));
        }
        if signed_twice_area(&pts).is_negative() {
            pts.reverse();
        }
        Self::new(pts)
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(
            Self::new(vertices.clone()).is_ok(),
            "invalid polygon {vertices:?}"
        );
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn locate(&self, p: &Point2) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orient(a, b, p) {
                Orientation::Clockwise => return Location::Outside,
                Orientation::Collinear => on_edge = true,
                Orientation::CounterClockwise => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Open parameter interval `(lo, hi)` of `origin + t * (dx, dy)` inside the
    /// open polygon, or `None` when the line misses the interior.
    pub fn chord(&self, origin: &Point2, dx: &Scalar, dy: &Scalar) -> Option<(Scalar, Scalar)> {
        let mut lo: Option<Scalar> = None;
        let mut hi: Option<Scalar> = None;
        for (v, w) in self.edges() {
            let ex = &w.x - &v.x;
            let ey = &w.y - &v.y;
            // cross(e, origin + t d - v) = a + b t
            let a = &ex * (&origin.y - &v.y) - &ey * (&origin.x - &v.x);
            let b = &ex * dy - &ey * dx;
            if b.is_zero() {
                if !a.is_positive() {
                    return None;
                }
                continue;
            }
            let root = -a / &b;
            if b.is_positive() {
                if lo.as_ref().is_none_or(|l| &root > l) {
                    lo = Some(root);
                }
            } else if hi.as_ref().is_none_or(|h| &root < h) {
                hi = Some(root);
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l < h => Some((l, h)),
            _ => None,
        }
    }

    pub fn line_chord(&self, line: &Line2) -> Option<(Scalar, Scalar)> {
        self.chord(&line.origin, &line.dir.dx(), &line.dir.dy())
    }

    /// The part of the ray inside the open polygon, as `(lo, hi)` with
    /// `0 <= lo < hi`.
    pub fn ray_chord(&self, ray: &Ray2) -> Option<(Scalar, Scalar)> {
        let (lo, hi) = self.chord(&ray.origin, &ray.dir.dx(), &ray.dir.dy())?;
        if !hi.is_positive() {
            return None;
        }
        Some((lo.max(Scalar::zero()), hi))
    }

    pub fn twice_area(&self) -> Scalar {
        signed_twice_area(&self.vertices)
    }

    pub fn area(&self) -> Scalar {
        self.twice_area() * half()
    }

    /// Vertex average; always strictly inside.
    pub fn centroid(&self) -> Point2 {
        let n = Scalar::from_integer(BigInt::from(self.vertices.len()));
        let mut sx = Scalar::zero();
        let mut sy = Scalar::zero();
        for v in &self.vertices {
            sx += &v.x;
            sy += &v.y;
        }
        Point2::new(sx / &n, sy / n)
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(&self.vertices).expect("nonempty polygon")
    }

    pub fn translate(&self, dx: &Scalar, dy: &Scalar) -> ConvexPoly {
        ConvexPoly {
            vertices: self.vertices.iter().map(|v| v.offset(dx, dy)).collect(),
        }
    }

    /// Largest `s` such that the open axis-aligned square of half-side `s`
    /// centred at the interior point `p` stays inside the polygon.
    pub fn linf_clearance(&self, p: &Point2) -> Scalar {
        let mut best: Option<Scalar> = None;
        for (v, w) in self.edges() {
            let ex = &w.x - &v.x;
            let ey = &w.y - &v.y;
            let value = &ex * (&p.y - &v.y) - &ey * (&p.x - &v.x);
            let s = value / (ex.abs() + ey.abs());
            if best.as_ref().is_none_or(|b| &s < b) {
                best = Some(s);
            }
        }
        best.expect("polygon has edges")
    }

    /// ℓ∞ distance from `p` to the closed polygon (zero inside).
    pub fn linf_distance(&self, p: &Point2) -> Scalar {
        if self.locate(p) != Location::Outside {
            return Scalar::zero();
        }
        self.edges()
            .map(|(a, b)| linf_dist_to_segment(p, a, b))
            .min()
            .expect("polygon has edges")
    }

    /// Cuts by `side(p)`: returns the parts where `side > 0` and `side < 0`
    /// that have positive area.
    pub fn split_by(
        &self,
        side: impl Fn(&Point2) -> Scalar,
    ) -> (Option<ConvexPoly>, Option<ConvexPoly>) {
        let vals: Vec<Scalar> = self.vertices.iter().map(&side).collect();
        let any_pos = vals.iter().any(|v| v.is_positive());
        let any_neg = vals.iter().any(|v| v.is_negative());
        match (any_pos, any_neg) {
            (true, false) => return (Some(self.clone()), None),
            (false, true) => return (None, Some(self.clone())),
            (false, false) => return (None, None),
            (true, true) => {}
        }
        let n = self.vertices.len();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let (vi, si) = (&self.vertices[i], &vals[i]);
            let (vj, sj) = (&self.vertices[j], &vals[j]);
            if !si.is_negative() {
                pos.push(vi.clone());
            }
            if !si.is_positive() {
                neg.push(vi.clone());
            }
            if (si.is_positive() && sj.is_negative()) || (si.is_negative() && sj.is_positive()) {
                let t = si / (si - sj);
                let cut = vi.lerp(vj, &t);
                pos.push(cut.clone());
                neg.push(cut);
            }
        }
        (
            Some(ConvexPoly::new_unchecked(pos)),
            Some(ConvexPoly::new_unchecked(neg)),
        )
    }

    pub fn split(&self, line: &LineEq) -> (Option<ConvexPoly>, Option<ConvexPoly>) {
        self.split_by(|p| line.eval(p))
    }

    /// True iff the line passes through the open interior.
    pub fn crossed_by(&self, line: &LineEq) -> bool {
        let mut pos = false;
        let mut neg = false;
        for v in &self.vertices {
            let s = line.eval(v);
            pos |= s.is_positive();
            neg |= s.is_negative();
            if pos && neg {
                return true;
            }
        }
        false
    }

    /// Intersection of the closed polygons, if it has positive area.
    pub fn clip(&self, other: &ConvexPoly) -> Option<ConvexPoly> {
        let mut cur = self.clone();
        for (a, b) in other.edges() {
            let (inside, _) = cur.split_by(|p| cross3(a, b, p));
            cur = inside?;
        }
        Some(cur)
    }

    /// Every vertex of `other` lies in the closure of `self`, hence the open
    /// `other` lies in the open `self`.
    pub fn contains_poly(&self, other: &ConvexPoly) -> bool {
        other
            .vertices
            .iter()
            .all(|v| self.locate(v) != Location::Outside)
    }
}

fn signed_twice_area(pts: &[Point2]) -> Scalar {
    let n = pts.len();
    let mut acc = Scalar::zero();
    for i in 0..n {
        let p = &pts[i];
        let q = &pts[(i + 1) % n];
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

/// ℓ∞ distance from `p` to the closed segment `a..b`. The objective is convex
/// piecewise linear in the segment parameter, so its minimum sits on one of
/// a handful of breakpoints.
fn linf_dist_to_segment(p: &Point2, a: &Point2, b: &Point2) -> Scalar {
    let ex = &b.x - &a.x;
    let ey = &b.y - &a.y;
    let ox = &a.x - &p.x;
    let oy = &a.y - &p.y;
    let mut ts = vec![Scalar::zero(), Scalar::one()];
    if !ex.is_zero() {
        ts.push(-&ox / &ex);
    }
    if !ey.is_zero() {
        ts.push(-&oy / &ey);
    }
    let d1 = &ex - &ey;
    if !d1.is_zero() {
        ts.push((&oy - &ox) / d1);
    }
    let d2 = &ex + &ey;
    if !d2.is_zero() {
        ts.push((-&oy - &ox) / d2);
    }
    ts.into_iter()
        .filter(|t| !t.is_negative() && *t <= Scalar::one())
        .map(|t| {
            let dx = (&ox + &t * &ex).abs();
            let dy = (&oy + &t * &ey).abs();
            dx.max(dy)
        })
        .min()
        .expect("endpoints always qualify")
}

pub fn point_locate_poly(p: &Point2, q: &ConvexPoly) -> Location {
    q.locate(p)
}

/// True iff the ray meets the open interior; grazing contact does not count.
pub fn ray_hits_poly_interior(r: &Ray2, q: &ConvexPoly) -> bool {
    q.ray_chord(r).is_some()
}

pub fn line_hits_poly_interior(l: &Line2, q: &ConvexPoly) -> bool {
    q.line_chord(l).is_some()
}

/// Separating-axis test on the edges of both polygons.
pub fn polys_interiors_intersect(q1: &ConvexPoly, q2: &ConvexPoly) -> bool {
    fn separates(edges_of: &ConvexPoly, other: &ConvexPoly) -> bool {
        edges_of.edges().any(|(a, b)| {
            other
                .vertices()
                .iter()
                .all(|w| orient(a, b, w) != Orientation::CounterClockwise)
        })
    }
    !(separates(q1, q2) || separates(q2, q1))
}

/// Strict counterclockwise hull (collinear boundary points dropped).
pub fn convex_hull(points: &[Point2]) -> Result<ConvexPoly> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!("{} distinct points", pts.len())));
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p)
                != Orientation::CounterClockwise
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p)
                != Orientation::CounterClockwise
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Degenerate("all points collinear".into()));
    }
    Ok(ConvexPoly::new_unchecked(lower))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_ints(x, y)
    }

    fn unit_square() -> ConvexPoly {
        ConvexPoly::new(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap()
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)).as_i8(), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)).as_i8(), 0);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)).as_i8(), -1);
    }

    #[test]
    fn dir_cmp_examples() {
        let d = Dir2::from_ints;
        assert_eq!(dir_cmp(&d(1, 0), &d(0, 1)), Ordering::Less);
        assert_eq!(dir_cmp(&d(0, 1), &d(-1, 0)), Ordering::Less);
        assert_eq!(dir_cmp(&d(1, 1), &d(2, 2)), Ordering::Equal);
        assert_eq!(d(1, 1), d(2, 2));
        assert_ne!(d(1, 0), d(-1, 0));
        assert_eq!(d(0, -1).cmp(&d(1, -1)), Ordering::Less);
    }

    #[test]
    fn dir_from_rationals_normalizes() {
        let a = Dir2::new(&ratio(1, 2), &ratio(3, 4)).unwrap();
        assert_eq!(a, Dir2::from_ints(2, 3));
        assert!(Dir2::new(&int(0), &int(0)).is_none());
    }

    #[test]
    fn ray_examples() {
        let sq = unit_square();
        let hit = Ray2::new(Point2::new(int(-1), ratio(1, 2)), Dir2::from_ints(1, 0));
        assert!(ray_hits_poly_interior(&hit, &sq));
        let miss = Ray2::new(p(-1, -1), Dir2::from_ints(1, 0));
        assert!(!ray_hits_poly_interior(&miss, &sq));
        let graze = Ray2::new(p(-1, 0), Dir2::from_ints(1, 0));
        assert!(!ray_hits_poly_interior(&graze, &sq));
        let away = Ray2::new(Point2::new(int(-1), ratio(1, 2)), Dir2::from_ints(-1, 0));
        assert!(!ray_hits_poly_interior(&away, &sq));
        // origin inside always hits
        let inside = Ray2::new(
            Point2::new(ratio(1, 2), ratio(1, 2)),
            Dir2::from_ints(-3, 7),
        );
        assert!(ray_hits_poly_interior(&inside, &sq));
    }

    #[test]
    fn locate_examples() {
        let sq = unit_square();
        assert_eq!(
            sq.locate(&Point2::new(ratio(1, 2), ratio(1, 2))),
            Location::Interior
        );
        assert_eq!(
            sq.locate(&Point2::new(int(0), ratio(1, 2))),
            Location::Boundary
        );
        assert_eq!(sq.locate(&p(2, 0)), Location::Outside);
        assert_eq!(sq.locate(&p(1, 1)), Location::Boundary);
    }

    #[test]
    fn interiors_intersect_examples() {
        let sq = unit_square();
        assert!(polys_interiors_intersect(
            &sq,
            &sq.translate(&ratio(1, 2), &int(0))
        ));
        assert!(!polys_interiors_intersect(
            &sq,
            &sq.translate(&int(1), &int(0))
        ));
        assert!(!polys_interiors_intersect(
            &sq,
            &sq.translate(&int(2), &int(0))
        ));
        assert!(!polys_interiors_intersect(
            &sq,
            &sq.translate(&int(1), &int(1))
        ));
    }

    #[test]
    fn hull_examples() {
        let h = convex_hull(&[
            p(0, 0),
            p(1, 0),
            p(0, 1),
            Point2::new(ratio(1, 4), ratio(1, 4)),
        ])
        .unwrap();
        assert_eq!(h.vertices(), &[p(0, 0), p(1, 0), p(0, 1)]);
        let h = convex_hull(&[p(0, 0), p(2, 0), p(1, 0), p(0, 2)]).unwrap();
        assert_eq!(h.vertices(), &[p(0, 0), p(2, 0), p(0, 2)]);
        assert!(matches!(
            convex_hull(&[p(0, 0), p(1, 0)]),
            Err(Error::Degenerate(_))
        ));
        assert!(convex_hull(&[p(0, 0), p(1, 1), p(2, 2), p(3, 3)]).is_err());
    }

    #[test]
    fn polygon_validation() {
        assert!(ConvexPoly::new(vec![p(0, 0), p(0, 1), p(1, 0)]).is_err());
        assert!(ConvexPoly::new(vec![p(0, 0), p(1, 0), p(2, 0), p(1, 1)]).is_err());
        let q = ConvexPoly::from_ring(vec![p(0, 0), p(0, 1), p(1, 1), p(1, 0), p(1, 0), p(0, 0)])
            .unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.area(), int(1));
        let q = ConvexPoly::from_ring(vec![p(0, 0), p(1, 0), p(2, 0), p(2, 2)]).unwrap();
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn split_and_clip() {
        let sq = unit_square();
        let line = LineEq::through(
            &Point2::new(ratio(1, 2), int(0)),
            &Point2::new(ratio(1, 2), int(1)),
        )
        .unwrap();
        let (a, b) = sq.split(&line);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert_eq!(a.area() + b.area(), int(1));
        assert_eq!(a.area(), ratio(1, 2));
        let diag = LineEq::through(&p(0, 0), &p(1, 1)).unwrap();
        let (a, b) = sq.split(&diag);
        assert_eq!(a.unwrap().len(), 3);
        assert_eq!(b.unwrap().len(), 3);
        let edge = LineEq::through(&p(0, 0), &p(1, 0)).unwrap();
        assert!(!sq.crossed_by(&edge));
        let c = sq.clip(&sq.translate(&ratio(1, 2), &ratio(1, 2))).unwrap();
        assert_eq!(c.area(), ratio(1, 4));
        assert!(sq.clip(&sq.translate(&int(1), &int(0))).is_none());
    }

    #[test]
    fn linf_measures() {
        let sq = unit_square();
        assert_eq!(
            sq.linf_clearance(&Point2::new(ratio(1, 2), ratio(1, 4))),
            ratio(1, 4)
        );
        assert_eq!(sq.linf_distance(&p(3, 2)), int(2));
        assert_eq!(sq.linf_distance(&Point2::new(ratio(1, 2), int(-3))), int(3));
        let tri = ConvexPoly::new(vec![p(0, 0), p(2, 0), p(0, 2)]).unwrap();
        // diagonal edge x + y = 2: from (2,2) the ℓ∞ ball of radius 1 touches (1,1)
        assert_eq!(tri.linf_distance(&p(2, 2)), int(1));
        // clearance from the diagonal: (1/2,1/2) -> (2 - 1)/2 = 1/2
        assert_eq!(
            tri.linf_clearance(&Point2::new(ratio(1, 2), ratio(1, 2))),
            ratio(1, 2)
        );
    }

    #[test]
    fn line_eq_canonical() {
        let l1 = LineEq::through(&p(0, 0), &p(2, 2)).unwrap();
        let l2 = LineEq::through(&p(3, 3), &p(-1, -1)).unwrap();
        assert_eq!(l1, l2);
        let x = l1
            .intersection(&LineEq::through(&p(0, 2), &p(2, 0)).unwrap())
            .unwrap();
        assert_eq!(x, p(1, 1));
    }
}
