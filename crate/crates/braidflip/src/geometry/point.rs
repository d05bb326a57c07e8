//! Planar points and the two geometric predicates everything else leans on.
//!
//! Both predicates are evaluated in double-double arithmetic (pairs of f64
//! carrying an exact error term), which gives ~32 significant digits: far
//! more than the declared decision thresholds, so the classification is
//! limited by the thresholds themselves and not by rounding.

use std::ops::{Add, Sub};

/// Relative tolerance for the in-circle determinant. A point counts as lying
/// on the circumcircle when |det| <= INCIRCLE_REL_TOL * scale^4, where scale
/// is the largest coordinate magnitude among the four points involved (the
/// determinant has degree 4 in the coordinates).
pub const INCIRCLE_REL_TOL: f64 = 1e-10;

/// Relative tolerance for the orientation determinant (degree 2): a triple
/// with |det| <= COLLINEAR_REL_TOL * scale^2 counts as collinear.
pub const COLLINEAR_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Largest coordinate magnitude; the size that tolerance scales refer to.
    pub fn magnitude(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    /// Lexicographic order by (x, y); total because braid coordinates are
    /// always finite.
    pub fn lex_cmp(self, other: Point) -> std::cmp::Ordering {
        (self.x, self.y)
            .partial_cmp(&(other.x, other.y))
            .expect("point coordinates must be finite")
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

// ---------------------------------------------------------------------------
// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

/// Exact sum: a + b = s + e with s = fl(a + b).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact sum under the precondition |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Exact product via fused multiply-add: a * b = p + e.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    /// The exact difference a - b, which never fits worse than a Dd.
    #[inline]
    fn from_diff(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, -b);
        Dd { hi, lo }
    }

    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + rhs.lo);
        Dd { hi, lo }
    }

    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self.add(Dd { hi: -rhs.hi, lo: -rhs.lo })
    }

    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

// ---------------------------------------------------------------------------
// Predicates.

/// Twice the signed area of triangle (p, q, r): positive when the triple is
/// counterclockwise.
pub fn orient2d(p: Point, q: Point, r: Point) -> f64 {
    let qx = Dd::from_diff(q.x, p.x);
    let qy = Dd::from_diff(q.y, p.y);
    let rx = Dd::from_diff(r.x, p.x);
    let ry = Dd::from_diff(r.y, p.y);
    qx.mul(ry).sub(qy.mul(rx)).value()
}

/// Whether (p, q, r) are collinear within the declared tolerance.
pub fn is_collinear(p: Point, q: Point, r: Point) -> bool {
    let scale = p.magnitude().max(q.magnitude()).max(r.magnitude()).max(1e-300);
    orient2d(p, q, r).abs() <= COLLINEAR_REL_TOL * scale * scale
}

/// The lifted 4x4 in-circle determinant, reduced to 3x3 by translating s to
/// the origin. For counterclockwise (p, q, r) the sign is positive when s is
/// strictly inside the circumcircle and negative outside; a collinear
/// (p, q, r) degenerates the circle into the line through them.
pub fn incircle_det(p: Point, q: Point, r: Point, s: Point) -> f64 {
    let ax = Dd::from_diff(p.x, s.x);
    let ay = Dd::from_diff(p.y, s.y);
    let bx = Dd::from_diff(q.x, s.x);
    let by = Dd::from_diff(q.y, s.y);
    let cx = Dd::from_diff(r.x, s.x);
    let cy = Dd::from_diff(r.y, s.y);
    let az = ax.mul(ax).add(ay.mul(ay));
    let bz = bx.mul(bx).add(by.mul(by));
    let cz = cx.mul(cx).add(cy.mul(cy));

    let m1 = by.mul(cz).sub(bz.mul(cy));
    let m2 = bx.mul(cz).sub(bz.mul(cx));
    let m3 = bx.mul(cy).sub(by.mul(cx));
    ax.mul(m1).sub(ay.mul(m2)).add(az.mul(m3)).value()
}

/// Classification of a point against the circumcircle of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleSide {
    Inside,
    On,
    Outside,
}

/// Where s lies relative to the circumcircle of (p, q, r). The triple is
/// oriented internally, so the caller may pass it in any order.
pub fn circumcircle_side(p: Point, q: Point, r: Point, s: Point) -> CircleSide {
    let det = if orient2d(p, q, r) >= 0.0 {
        incircle_det(p, q, r, s)
    } else {
        incircle_det(p, r, q, s)
    };
    let scale = p
        .magnitude()
        .max(q.magnitude())
        .max(r.magnitude())
        .max(s.magnitude())
        .max(1e-300);
    let threshold = INCIRCLE_REL_TOL * scale.powi(4);
    if det.abs() <= threshold {
        CircleSide::On
    } else if det > 0.0 {
        CircleSide::Inside
    } else {
        CircleSide::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_corners_are_cocircular() {
        let det = incircle_det(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0));
        assert_eq!(det, 0.0);
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)),
            CircleSide::On
        );
    }

    #[test]
    fn interior_point_is_inside() {
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(0.25, 0.25)),
            CircleSide::Inside
        );
    }

    #[test]
    fn far_point_is_outside() {
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(5.0, 5.0)),
            CircleSide::Outside
        );
    }

    #[test]
    fn orientation_of_triple_does_not_change_verdict() {
        // Same query, clockwise triangle.
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0), p(0.25, 0.25)),
            CircleSide::Inside
        );
    }

    #[test]
    fn orient2d_signs() {
        assert!(orient2d(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)) > 0.0);
        assert!(orient2d(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)) < 0.0);
        assert_eq!(orient2d(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)), 0.0);
        assert!(is_collinear(p(0.0, 0.0), p(1.0 / 3.0, 0.0), p(1.0, 0.0)));
    }

    #[test]
    fn near_cocircular_classification_is_sharp() {
        // Shift the fourth square corner outward by slightly more than the
        // tolerance window and the verdict must flip to Outside.
        let eps = 1e-9;
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0 + eps, 1.0 + eps)),
            CircleSide::Outside
        );
        let tiny = 1e-12;
        assert_eq!(
            circumcircle_side(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0 + tiny, 1.0 + tiny)),
            CircleSide::On
        );
    }
}
