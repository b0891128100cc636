//! Closed contours and arc-length resampling.

use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point};
use crate::scalar::Real;

/// Cyclic index into a contour of `len` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointIndex(pub usize);

impl PointIndex {
    /// `idx + delta` modulo `len`.
    #[inline]
    pub fn offset(self, delta: isize, len: usize) -> Self {
        let n = len as isize;
        PointIndex((self.0 as isize + delta).rem_euclid(n) as usize)
    }

    /// Number of forward steps from `self` to `to`.
    #[inline]
    pub fn forward_to(self, to: Self, len: usize) -> usize {
        (to.0 + len - self.0) % len
    }

    /// Shorter of the two geodesic (point-count) distances.
    #[inline]
    pub fn cyclic_distance(self, other: Self, len: usize) -> usize {
        let d = self.forward_to(other, len);
        d.min(len - d)
    }
}

/// Closed outer outline, stored counter-clockwise without a repeated closing
/// point.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour<T> {
    points: Vec<Point<T>>,
}

impl<T: Real> Contour<T> {
    /// Builds a contour, dropping consecutive duplicates (including the wrap
    /// pair) and reversing clockwise input while keeping the first point.
    pub fn new(points: Vec<Point<T>>) -> Result<Self> {
        let eps = T::coincidence_eps();
        let mut pts: Vec<Point<T>> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last().map_or(true, |q: &Point<T>| q.distance(p) > eps) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts[0].distance(*pts.last().unwrap()) <= eps {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(Error::TooFewPoints(pts.len()));
        }
        if signed_area(&pts) < T::zero() {
            pts[1..].reverse();
        }
        Ok(Self { points: pts })
    }

    #[inline]
    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    /// Total number of contour points.
    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Contours are always closed.
    #[inline]
    pub fn is_closed(&self) -> bool {
        true
    }

    #[inline]
    pub fn at(&self, i: PointIndex) -> Point<T> {
        self.points[i.0 % self.points.len()]
    }

    /// Cyclic access with a signed index.
    #[inline]
    pub fn wrap(&self, i: isize) -> Point<T> {
        let n = self.points.len() as isize;
        self.points[i.rem_euclid(n) as usize]
    }

    pub fn perimeter(&self) -> T {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].distance(self.points[(i + 1) % n]))
            .sum()
    }

    pub fn signed_area(&self) -> T {
        signed_area(&self.points)
    }

    /// Same ring starting at point `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut pts = self.points.clone();
        let len = pts.len();
        pts.rotate_left(k % len);
        Self { points: pts }
    }

    /// Applies `f` to every point and re-validates (orientation is
    /// re-normalized, so reflections come back counter-clockwise).
    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>) -> Result<Self> {
        Self::new(self.points.iter().map(|&p| f(p)).collect())
    }

    /// Cumulative arc length at every vertex; entry `len()` is the perimeter.
    pub fn cumulative_arc(&self) -> Vec<T> {
        let n = self.points.len();
        let mut acc = Vec::with_capacity(n + 1);
        let mut s = T::zero();
        acc.push(s);
        for i in 0..n {
            s += self.points[i].distance(self.points[(i + 1) % n]);
            acc.push(s);
        }
        acc
    }

    /// Arc length walked forward from `from` to `to`.
    pub fn forward_arc(&self, from: usize, to: usize) -> T {
        let n = self.points.len();
        let mut s = T::zero();
        let mut i = from % n;
        while i != to % n {
            s += self.points[i].distance(self.points[(i + 1) % n]);
            i = (i + 1) % n;
        }
        s
    }

    /// Resamples to `n` points spaced evenly by arc length, starting at the
    /// first point and keeping orientation. The arc-length samples are then
    /// nudged (by a fraction of the spacing, only near corners) until all
    /// chords are equal, so resampling the result again at the same `n`
    /// reproduces it.
    pub fn resample(&self, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidResampleCount(n));
        }
        let out = self
            .equal_chord(n)
            // Contour too irregular for the equal-chord construction.
            .unwrap_or_else(|| self.resample_arc_length(n));
        Self::new(out).map(|c| {
            debug_assert_eq!(c.len(), n);
            c
        })
    }

    /// Moves arc-length samples the least distance (in the Gauss-Newton
    /// sense) needed to make every chord equal, keeping the first point. An
    /// equal-chord polygon is its own arc-length resampling, which is what
    /// makes `resample` idempotent. Returns `None` if the iteration stalls.
    fn equal_chord(&self, n: usize) -> Option<Vec<Point<T>>> {
        let mut x = self.resample_arc_length(n);
        let perimeter = self.perimeter();
        let tol = perimeter * T::epsilon() * T::lit(64.0);
        let mut h = perimeter / T::from_count(n);

        // f_k = |x_k - x_{k-1}| - h for k = 1..=n with x_n = x_0.
        let residual = |x: &[Point<T>], h: T| -> T {
            (1..=n)
                .map(|k| (x[k % n].distance(x[k - 1]) - h).abs())
                .fold(T::zero(), T::max)
        };
        let mut res = residual(&x, h);
        for _ in 0..60 {
            if res <= tol {
                return Some(x);
            }
            // unit chords u[k] for k = 1..=n (index 0 unused)
            let mut u = vec![Point::origin(); n + 1];
            let mut f = vec![T::zero(); n + 1];
            for k in 1..=n {
                let d = x[k % n] - x[k - 1];
                let len = d.norm();
                if len <= T::zero() {
                    return None;
                }
                u[k] = d * (T::one() / len);
                f[k] = len - h;
            }
            // J J^T = T + 1 1^T with T tridiagonal: x_k moves for 1 <= k < n.
            let diag: Vec<T> = (1..=n)
                .map(|k| T::from_count(usize::from(k < n) + usize::from(k >= 2)))
                .collect();
            let off: Vec<T> = (1..n).map(|k| -u[k].dot(u[k + 1])).collect();
            let a = solve_tridiagonal(&diag, &off, &f[1..])?;
            let b = solve_tridiagonal(&diag, &off, &vec![T::one(); n])?;
            let sa: T = a.iter().copied().sum();
            let sb: T = b.iter().copied().sum();
            let y: Vec<T> = a
                .iter()
                .zip(&b)
                .map(|(&ai, &bi)| ai - bi * sa / (T::one() + sb))
                .collect();
            // y[k - 1] pairs with row k
            let mut dx = vec![Point::origin(); n];
            for k in 1..n {
                dx[k] = u[k] * y[k - 1] - u[k + 1] * y[k];
            }
            let dh: T = y.iter().copied().sum();
            let mut step = T::one();
            let mut improved = false;
            for _ in 0..30 {
                let trial: Vec<Point<T>> =
                    x.iter().zip(&dx).map(|(&p, &d)| p - d * step).collect();
                let th = h + dh * step;
                let tr = residual(&trial, th);
                if th > T::zero() && tr < res {
                    x = trial;
                    h = th;
                    res = tr;
                    improved = true;
                    break;
                }
                step *= T::lit(0.5);
            }
            if !improved {
                break;
            }
        }
        (res <= tol).then_some(x)
    }

    /// Plain arc-length resampling: `n` points at perimeter / n spacing
    /// measured along the outline.
    pub fn resample_arc_length(&self, n: usize) -> Vec<Point<T>> {
        let cum = self.cumulative_arc();
        let total = cum[self.points.len()];
        let m = self.points.len();
        let mut out = Vec::with_capacity(n);
        let mut seg = 0usize;
        for k in 0..n {
            let s = total * T::from_count(k) / T::from_count(n);
            while seg + 1 < m && cum[seg + 1] < s {
                seg += 1;
            }
            let len = cum[seg + 1] - cum[seg];
            let t = if len > T::zero() {
                (s - cum[seg]) / len
            } else {
                T::zero()
            };
            out.push(self.points[seg].lerp(self.points[(seg + 1) % m], t));
        }
        out
    }
}

/// Thomas algorithm for a symmetric tridiagonal system.
fn solve_tridiagonal<T: Real>(diag: &[T], off: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut denom = diag[0];
    if denom.abs() <= T::epsilon() {
        return None;
    }
    c[0] = if n > 1 { off[0] / denom } else { T::zero() };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if denom.abs() <= T::epsilon() {
            return None;
        }
        c[i] = if i + 1 < n { off[i] / denom } else { T::zero() };
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    d.iter().all(|v| v.is_finite()).then_some(d)
}
