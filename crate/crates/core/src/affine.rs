//! Moment-based affine normalization of GS point sets followed by a
//! similarity that pins fixed anchors.

use crate::error::{Error, Result};
use crate::geometry::{Affine2, Point};
use crate::gs::GroupOfSegments;
use crate::scalar::Real;

/// Centered second moments of a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrix<T> {
    /// `[[m_xx, m_xy], [m_xy, m_yy]]`, normalized by the point count.
    pub m: [[T; 2]; 2],
    pub mean: Point<T>,
    /// Set when the points are (numerically) collinear.
    pub singular: bool,
}

impl<T: Real> MomentMatrix<T> {
    pub fn determinant(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1]
    }

    /// Eigenvalues, larger first.
    pub fn eigenvalues(&self) -> (T, T) {
        let half = self.trace() * T::lit(0.5);
        let disc = (half * half - self.determinant()).max(T::zero()).sqrt();
        (half + disc, half - disc)
    }

    /// Symmetric inverse square root `M^{-1/2}`.
    pub fn inverse_sqrt(&self) -> Result<[[T; 2]; 2]> {
        if self.singular {
            return Err(Error::DegenerateGs("singular moment matrix"));
        }
        // sqrt(M) = (M + sI) / t with s = sqrt(det M), t = sqrt(tr M + 2s)
        let s = self.determinant().sqrt();
        let t = (self.trace() + T::lit(2.0) * s).sqrt();
        let r = [
            [(self.m[0][0] + s) / t, self.m[0][1] / t],
            [self.m[1][0] / t, (self.m[1][1] + s) / t],
        ];
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        Ok([
            [r[1][1] / det, -r[0][1] / det],
            [-r[1][0] / det, r[0][0] / det],
        ])
    }
}

pub fn moment_matrix<T: Real>(points: &[Point<T>]) -> Result<MomentMatrix<T>> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let n = T::from_count(points.len());
    let mean = points
        .iter()
        .fold(Point::origin(), |acc, &p| acc + p)
        * (T::one() / n);
    let (mut xx, mut xy, mut yy) = (T::zero(), T::zero(), T::zero());
    for &p in points {
        let d = p - mean;
        xx += d.x * d.x;
        xy += d.x * d.y;
        yy += d.y * d.y;
    }
    let m = [[xx / n, xy / n], [xy / n, yy / n]];
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    let singular = !(tr > T::zero()) || det <= tr * tr * T::lit(1e-10);
    Ok(MomentMatrix { m, mean, singular })
}

/// Centers the points and whitens them with `M^{-1/2}`. Returns the mapped
/// points and the transform that produced them.
pub fn affine_normalize<T: Real>(points: &[Point<T>]) -> Result<(Vec<Point<T>>, Affine2<T>)> {
    let mm = moment_matrix(points)?;
    let a = mm.inverse_sqrt()?;
    let tf = Affine2::linear(a).compose(&Affine2::translation(-mm.mean));
    Ok((points.iter().map(|&p| tf.apply(p)).collect(), tf))
}

/// Similarity placing an open run from `(0,0)` to `(length,0)`, or a closed
/// run with its centroid at the origin and its start at `(length/2, 0)`.
pub fn rotation_normalize<T: Real>(
    points: &[Point<T>],
    is_closed: bool,
    length: T,
) -> Result<(Vec<Point<T>>, Affine2<T>)> {
    if points.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let start = points[0];
    let (origin, v, target) = if is_closed {
        let n = T::from_count(points.len());
        let c = points.iter().fold(Point::origin(), |acc, &p| acc + p) * (T::one() / n);
        (c, start - c, length * T::lit(0.5))
    } else {
        let end = *points.last().unwrap();
        (start, end - start, length)
    };
    let len = v.norm();
    if !(len > T::coincidence_eps()) {
        return Err(Error::DegenerateGs("anchor points coincide"));
    }
    let tf = Affine2::similarity(-v.heading(), target / len, Point::origin())
        .compose(&Affine2::translation(-origin));
    Ok((points.iter().map(|&p| tf.apply(p)).collect(), tf))
}

/// A GS mapped to its canonical frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedGs<T> {
    pub points: Vec<Point<T>>,
    /// Original frame to canonical frame.
    pub transform: Affine2<T>,
    pub is_closed: bool,
    /// Collinear input: only the similarity step was applied.
    pub low_rank: bool,
}

/// Full normalization of a point run. Collinear runs skip whitening.
pub fn normalize_points<T: Real>(
    points: &[Point<T>],
    is_closed: bool,
    length: T,
) -> Result<NormalizedGs<T>> {
    let mm = moment_matrix(points)?;
    let (whitened, first, low_rank) = if mm.singular {
        (points.to_vec(), Affine2::identity(), true)
    } else {
        let (w, tf) = affine_normalize(points)?;
        (w, tf, false)
    };
    let (pts, second) = rotation_normalize(&whitened, is_closed, length)?;
    Ok(NormalizedGs {
        points: pts,
        transform: second.compose(&first),
        is_closed,
        low_rank,
    })
}

pub fn normalize_gs<T: Real>(gs: &GroupOfSegments<T>, length: T) -> Result<NormalizedGs<T>> {
    normalize_points(&gs.points, gs.is_closed, length)
}
