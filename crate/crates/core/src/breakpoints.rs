//! Break-point detection: angle-sharpness maxima, opposite points across
//! concavities, and max-size filler points; and the resulting segments.

use std::fmt;
use std::str::FromStr;

use crate::contour::{Contour, PointIndex};
use crate::error::{Error, Result};
use crate::geometry::{angle_at, turn_angle};
use crate::params::CostParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessParams<T> {
    /// Neighbour pairs on either side (`N_s`).
    pub neighborhood: usize,
    pub sigma: T,
    /// Degrees.
    pub threshold: T,
    pub nms_radius: usize,
}

impl<T: Real> SharpnessParams<T> {
    /// Scale-relative defaults for a contour of `len` points.
    pub fn for_contour(len: usize, p: &CostParams<T>) -> Self {
        let raw = (p.sharpness_frac * T::from_count(len))
            .round()
            .to_usize()
            .unwrap_or(0);
        let max_ns = ((len.saturating_sub(1)) / 2).max(1);
        let ns = raw.max(p.sharpness_min).min(max_ns).max(1);
        Self {
            neighborhood: ns,
            sigma: T::from_count(ns) / T::lit(3.0),
            threshold: p.sharpness_threshold,
            nms_radius: ns,
        }
    }

    /// Normalized pair weights `w_1..w_Ns`, Gaussian in `j` centred on
    /// `N_s / 2`.
    pub fn weights(&self) -> Vec<T> {
        let ns = self.neighborhood;
        if ns == 1 {
            return vec![T::one()];
        }
        let centre = T::from_count(ns) / T::lit(2.0);
        let two_var = T::lit(2.0) * self.sigma * self.sigma;
        let raw: Vec<T> = (1..=ns)
            .map(|j| {
                let d = T::from_count(j) - centre;
                (-(d * d) / two_var).exp()
            })
            .collect();
        let total: T = raw.iter().copied().sum();
        raw.into_iter().map(|w| w / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BreakKind {
    HighCurvature,
    Opposite,
    MaxSize,
}

impl fmt::Display for BreakKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakKind::HighCurvature => "high_curvature",
            BreakKind::Opposite => "opposite",
            BreakKind::MaxSize => "max_size",
        })
    }
}

impl FromStr for BreakKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high_curvature" => Ok(BreakKind::HighCurvature),
            "opposite" => Ok(BreakKind::Opposite),
            "max_size" => Ok(BreakKind::MaxSize),
            other => Err(Error::Parse(format!("unknown break-point kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakPoint<T> {
    pub index: PointIndex,
    pub kind: BreakKind,
    /// Angle sharpness for high-curvature points, zero otherwise.
    pub sharpness: T,
}

impl<T: Real> BreakPoint<T> {
    pub fn new(index: usize, kind: BreakKind, sharpness: T) -> Self {
        Self {
            index: PointIndex(index),
            kind,
            sharpness,
        }
    }
}

/// Contour portion between two consecutive break-points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub start_bp: BreakPoint<T>,
    pub end_bp: BreakPoint<T>,
    /// Points from `start_bp` (inclusive) to `end_bp` (exclusive).
    pub point_count: usize,
    /// `point_count / total_points`.
    pub weight: T,
}

/// Gaussian-weighted sum of deviations from straightness around point `i`.
pub fn angle_sharpness<T: Real>(
    c: &Contour<T>,
    i: PointIndex,
    p: &SharpnessParams<T>,
) -> Result<T> {
    let weights = p.weights();
    let centre = c.at(i);
    let mut s = T::zero();
    for (k, w) in weights.iter().enumerate() {
        let j = (k + 1) as isize;
        let a = c.wrap(i.0 as isize - j);
        let b = c.wrap(i.0 as isize + j);
        s += *w * (T::lit(180.0) - angle_at(a, centre, b)?);
    }
    Ok(s)
}

/// Sharpness at every contour point.
pub fn sharpness_profile<T: Real>(c: &Contour<T>, p: &SharpnessParams<T>) -> Result<Vec<T>> {
    (0..c.len())
        .map(|i| angle_sharpness(c, PointIndex(i), p))
        .collect()
}

/// Weighted signed turn at `i`; negative means the outline bends away from
/// the interior of a counter-clockwise contour (a reflex vertex).
pub fn signed_turn<T: Real>(c: &Contour<T>, i: PointIndex, p: &SharpnessParams<T>) -> Result<T> {
    let weights = p.weights();
    let centre = c.at(i);
    let mut s = T::zero();
    for (k, w) in weights.iter().enumerate() {
        let j = (k + 1) as isize;
        let a = c.wrap(i.0 as isize - j);
        let b = c.wrap(i.0 as isize + j);
        s += *w * turn_angle(a, centre, b)?;
    }
    Ok(s)
}

pub fn is_concave<T: Real>(c: &Contour<T>, i: PointIndex, p: &SharpnessParams<T>) -> Result<bool> {
    Ok(signed_turn(c, i, p)? < T::zero())
}

/// Cyclic local maxima of the sharpness above threshold, thinned so that
/// only the highest survives within `nms_radius` (ties to the lower index).
pub fn detect_high_curvature<T: Real>(
    c: &Contour<T>,
    p: &SharpnessParams<T>,
) -> Result<Vec<BreakPoint<T>>> {
    let s = sharpness_profile(c, p)?;
    Ok(select_maxima(&s, p.threshold, p.nms_radius))
}

pub(crate) fn select_maxima<T: Real>(s: &[T], threshold: T, radius: usize) -> Vec<BreakPoint<T>> {
    let n = s.len();
    let mut cands: Vec<usize> = (0..n)
        .filter(|&i| {
            let prev = s[(i + n - 1) % n];
            let next = s[(i + 1) % n];
            s[i] > threshold && s[i] > prev && s[i] >= next
        })
        .collect();
    cands.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap().then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in cands {
        let close = kept
            .iter()
            .any(|&k| PointIndex(i).cyclic_distance(PointIndex(k), n) <= radius);
        if !close {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter()
        .map(|i| BreakPoint::new(i, BreakKind::HighCurvature, s[i]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OppositeParams<T> {
    /// Search radius, fraction of contour length.
    pub d_frac: T,
    /// Minimum geodesic separation, fraction of contour length.
    pub gd_min_frac: T,
    /// Required `ED <= ed_ratio * arc`.
    pub ed_ratio: T,
    /// High-curvature points this close to a candidate replace it.
    pub snap_radius: usize,
}

impl<T: Real> OppositeParams<T> {
    pub fn from_params(p: &CostParams<T>, snap_radius: usize) -> Self {
        Self {
            d_frac: p.opposite_frac,
            gd_min_frac: p.opposite_gd_min,
            ed_ratio: p.opposite_ed_ratio,
            snap_radius,
        }
    }
}

/// Opposite point for each concave point: the contour point within the
/// geodesic search window whose Euclidean distance to the concave point is a
/// local minimum, forming a genuine pinch (short crossing over a long arc).
/// Snaps to a nearby high-curvature point when one exists.
pub fn detect_opposite_points<T: Real>(
    c: &Contour<T>,
    concave: &[BreakPoint<T>],
    high_curvature: &[BreakPoint<T>],
    p: &OppositeParams<T>,
) -> Vec<BreakPoint<T>> {
    let n = c.len();
    let nf = T::from_count(n);
    let d_max = (p.d_frac * nf).floor().to_usize().unwrap_or(0);
    let gd_min = (p.gd_min_frac * nf).ceil().to_usize().unwrap_or(1).max(1);
    let arc = c.cumulative_arc();
    let perimeter = arc[n];
    let mut out = Vec::new();
    for cp in concave {
        let pi = cp.index;
        let origin = c.at(pi);
        let ed = |k: usize| c.at(PointIndex(k)).distance(origin);
        let mut best: Option<(T, usize, usize)> = None;
        for g in gd_min..=d_max.min(n / 2) {
            for sign in [1isize, -1] {
                let k = pi.offset(sign * g as isize, n).0;
                let d = ed(k);
                let local_min = d <= ed((k + n - 1) % n) && d <= ed((k + 1) % n);
                if !local_min {
                    continue;
                }
                let fwd = (arc[k] - arc[pi.0] + perimeter) % perimeter;
                let along = fwd.min(perimeter - fwd);
                if d > p.ed_ratio * along {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bd, bg, bk)) => d < bd || (d == bd && (g, k) < (bg, bk)),
                };
                if better {
                    best = Some((d, g, k));
                }
            }
        }
        if let Some((_, _, k)) = best {
            let snapped = high_curvature
                .iter()
                .map(|h| (h.index.cyclic_distance(PointIndex(k), n), h.index.0))
                .filter(|&(d, _)| d <= p.snap_radius)
                .min();
            let idx = snapped.map_or(k, |(_, i)| i);
            if idx != pi.0 {
                out.push(BreakPoint::new(idx, BreakKind::Opposite, T::zero()));
            }
        }
    }
    out.sort_by_key(|b| b.index);
    out.dedup_by_key(|b| b.index);
    out
}

/// Inserts equally spaced max-size points so that no two consecutive
/// break-points are more than `d_k * len` points apart.
pub fn insert_max_size_points<T: Real>(
    len: usize,
    bps: &[BreakPoint<T>],
    d_k: T,
) -> Vec<BreakPoint<T>> {
    let limit = (d_k * T::from_count(len))
        .floor()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let mut sorted: Vec<BreakPoint<T>> = bps.to_vec();
    sorted.sort_by_key(|b| b.index);
    sorted.dedup_by_key(|b| b.index);
    if sorted.is_empty() {
        sorted.push(BreakPoint::new(0, BreakKind::MaxSize, T::zero()));
    }
    let m = sorted.len();
    let mut out = Vec::with_capacity(m + len / limit + 1);
    for k in 0..m {
        let cur = sorted[k];
        out.push(cur);
        let next = sorted[(k + 1) % m];
        let gap = if m == 1 {
            len
        } else {
            cur.index.forward_to(next.index, len)
        };
        if gap > limit {
            let pieces = gap.div_ceil(limit);
            for q in 1..pieces {
                let off = (q * gap + pieces / 2) / pieces;
                out.push(BreakPoint::new(
                    (cur.index.0 + off) % len,
                    BreakKind::MaxSize,
                    T::zero(),
                ));
            }
        }
    }
    out.sort_by_key(|b| b.index);
    out
}

/// Full detection pipeline on a resampled contour.
pub fn detect_breakpoints<T: Real>(c: &Contour<T>, p: &CostParams<T>) -> Result<Vec<BreakPoint<T>>> {
    let sp = SharpnessParams::for_contour(c.len(), p);
    let high = detect_high_curvature(c, &sp)?;
    let mut concave = Vec::new();
    for b in &high {
        if is_concave(c, b.index, &sp)? {
            concave.push(*b);
        }
    }
    let opposite = detect_opposite_points(c, &concave, &high, &OppositeParams::from_params(p, sp.nms_radius));
    let mut all = high;
    for o in opposite {
        if !all.iter().any(|h| h.index == o.index) {
            all.push(o);
        }
    }
    all.sort_by_key(|b| b.index);
    Ok(insert_max_size_points(c.len(), &all, p.d_k))
}

/// Splits the contour at the given sorted break-points; `n` break-points
/// give `n` segments tiling the ring.
pub fn segment_contour<T: Real>(c: &Contour<T>, bps: &[BreakPoint<T>]) -> Result<Vec<Segment<T>>> {
    if bps.len() < 2 {
        return Err(Error::InsufficientBreakPoints(bps.len()));
    }
    let n = c.len();
    let total = T::from_count(n);
    Ok((0..bps.len())
        .map(|k| {
            let a = bps[k];
            let b = bps[(k + 1) % bps.len()];
            let count = a.index.forward_to(b.index, n);
            Segment {
                start_bp: a,
                end_bp: b,
                point_count: count,
                weight: T::from_count(count) / total,
            }
        })
        .collect())
}

/// Sidecar text: one `idx kind sharpness` line per break-point.
pub fn format_breakpoints<T: Real>(bps: &[BreakPoint<T>]) -> String {
    bps.iter()
        .map(|b| format!("{} {} {}\n", b.index.0, b.kind, b.sharpness))
        .collect()
}

pub fn parse_breakpoints<T: Real>(text: &str) -> Result<Vec<BreakPoint<T>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("break-point line `{line}`")));
            }
            let idx = f[0]
                .parse()
                .map_err(|_| Error::Parse(format!("break-point index `{}`", f[0])))?;
            let sharp = f[2]
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("break-point sharpness `{}`", f[2])))?;
            Ok(BreakPoint::new(idx, f[1].parse()?, sharp))
        })
        .collect()
}
