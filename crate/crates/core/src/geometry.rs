//! Planar primitives.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{to_degrees, Real};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Direction angle in radians, `atan2(y, x)`.
    #[inline]
    pub fn heading(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    pub fn cast<U: Real>(self) -> Point<U> {
        Point::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T: Real> Add for Point<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> Sub for Point<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> Mul<T> for Point<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Neg for Point<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Unsigned angle between two vectors, in degrees `[0, 180]`.
pub fn vector_angle<T: Real>(u: Point<T>, v: Point<T>) -> Result<T> {
    let eps = T::coincidence_eps();
    if u.norm() <= eps || v.norm() <= eps {
        return Err(Error::ZeroLengthVector);
    }
    Ok(to_degrees(u.cross(v).abs().atan2(u.dot(v))))
}

/// Interior angle at `b` of the path `a -> b -> c`, in degrees `[0, 180]`.
pub fn angle_at<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> Result<T> {
    vector_angle(a - b, c - b).map_err(|_| Error::DegenerateAngle)
}

/// Signed turning angle (degrees, counter-clockwise positive) when walking
/// `a -> b -> c`.
pub fn turn_angle<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> Result<T> {
    let u = b - a;
    let v = c - b;
    let eps = T::coincidence_eps();
    if u.norm() <= eps || v.norm() <= eps {
        return Err(Error::DegenerateAngle);
    }
    Ok(to_degrees(u.cross(v).atan2(u.dot(v))))
}

/// Shoelace signed area; positive for counter-clockwise rings.
pub fn signed_area<T: Real>(pts: &[Point<T>]) -> T {
    let n = pts.len();
    if n < 3 {
        return T::zero();
    }
    let mut acc = T::zero();
    for i in 0..n {
        acc += pts[i].cross(pts[(i + 1) % n]);
    }
    acc * T::lit(0.5)
}

/// Arithmetic mean of a point set.
pub fn centroid<T: Real>(pts: &[Point<T>]) -> Point<T> {
    let n = T::from_count(pts.len().max(1));
    let (sx, sy) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

/// Length of an open polyline.
pub fn polyline_length<T: Real>(pts: &[Point<T>]) -> T {
    pts.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Point at half the arc length of an open polyline.
pub fn arc_midpoint<T: Real>(pts: &[Point<T>]) -> Point<T> {
    if pts.len() < 2 {
        return pts.first().copied().unwrap_or_else(Point::origin);
    }
    let half = polyline_length(pts) * T::lit(0.5);
    let mut acc = T::zero();
    for w in pts.windows(2) {
        let len = w[0].distance(w[1]);
        if acc + len >= half && len > T::zero() {
            return w[0].lerp(w[1], (half - acc) / len);
        }
        acc += len;
    }
    *pts.last().unwrap()
}

/// 2x3 affine map `p -> A p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine2<T> {
    pub a: [[T; 2]; 2],
    pub t: Point<T>,
}

impl<T: Real> Affine2<T> {
    pub fn identity() -> Self {
        Self::linear([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn linear(a: [[T; 2]; 2]) -> Self {
        Self {
            a,
            t: Point::origin(),
        }
    }

    pub fn translation(t: Point<T>) -> Self {
        Self {
            t,
            ..Self::identity()
        }
    }

    /// Rotation by `angle` radians followed by uniform `scale`.
    pub fn similarity(angle: T, scale: T, t: Point<T>) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            a: [[scale * c, -scale * s], [scale * s, scale * c]],
            t,
        }
    }

    #[inline]
    pub fn apply(&self, p: Point<T>) -> Point<T> {
        Point::new(
            self.a[0][0] * p.x + self.a[0][1] * p.y + self.t.x,
            self.a[1][0] * p.x + self.a[1][1] * p.y + self.t.y,
        )
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Self {
        let a = &self.a;
        let b = &inner.a;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let t = self.apply(inner.t);
        Self { a: m, t }
    }

    pub fn determinant(&self) -> T {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point<f64> {
        Point::new(x, y)
    }

    #[test]
    fn angle_examples() {
        assert!((angle_at(p(0., 0.), p(1., 0.), p(2., 0.)).unwrap() - 180.0).abs() < 1e-12);
        assert!((angle_at(p(0., 0.), p(1., 0.), p(1., 1.)).unwrap() - 90.0).abs() < 1e-12);
        let r = 80f64.to_radians();
        let a = angle_at(p(0., 0.), p(1., 0.), p(1. + r.cos(), r.sin())).unwrap();
        // direct dot-product evaluation
        let u = (-1.0f64, 0.0f64);
        let v = (r.cos(), r.sin());
        let oracle = ((u.0 * v.0 + u.1 * v.1) / (v.0.hypot(v.1))).acos().to_degrees();
        assert!((a - oracle).abs() < 1e-9);
        assert!((a - 100.0).abs() < 1e-9);
    }

    #[test]
    fn coincident_points_fail() {
        assert!(matches!(
            angle_at(p(0., 0.), p(0., 0.), p(1., 1.)),
            Err(Error::DegenerateAngle)
        ));
    }

    #[test]
    fn shoelace_orientation() {
        let ccw = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
        assert!((signed_area(&ccw) - 1.0).abs() < 1e-12);
        let cw: Vec<_> = ccw.iter().rev().copied().collect();
        assert!((signed_area(&cw) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn compose_applies_inner_first() {
        let rot = Affine2::similarity(std::f64::consts::FRAC_PI_2, 2.0, Point::origin());
        let shift = Affine2::translation(p(1.0, 0.0));
        let both = rot.compose(&shift);
        let q = both.apply(p(0.0, 0.0));
        assert!((q.x - 0.0).abs() < 1e-12 && (q.y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn midpoint_of_l_path() {
        let m = arc_midpoint(&[p(0., 0.), p(2., 0.), p(2., 2.)]);
        assert!((m.x - 2.0).abs() < 1e-12 && m.y.abs() < 1e-12);
    }
}
