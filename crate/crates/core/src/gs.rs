//! Groups of segments: contiguous runs of segments whose complexity lies in
//! the configured range.

use std::collections::HashMap;

use crate::breakpoints::Segment;
use crate::contour::{Contour, PointIndex};
use crate::error::Result;
use crate::geometry::{angle_at, arc_midpoint, Point};
use crate::params::CostParams;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupOfSegments<T> {
    /// First segment of the run.
    pub start_seg: usize,
    /// Last segment of the run (inclusive, cyclic).
    pub end_seg: usize,
    pub seg_count: usize,
    /// `N(gs)`.
    pub point_count: usize,
    /// `N(gs) / N`.
    pub weight: T,
    /// Degrees.
    pub complexity: T,
    /// Sub-polyline from the start break-point to the end break-point. For a
    /// closed GS the ring is listed once without repeating the start.
    pub points: Vec<Point<T>>,
    pub is_closed: bool,
    pub start_point: PointIndex,
    pub end_point: PointIndex,
    /// Arc-length midpoint, original frame.
    pub midpoint: Point<T>,
}

impl<T: Real> GroupOfSegments<T> {
    pub fn start(&self) -> Point<T> {
        self.points[0]
    }

    pub fn end(&self) -> Point<T> {
        if self.is_closed {
            self.points[0]
        } else {
            *self.points.last().unwrap()
        }
    }

    /// Break-point ordinal where the run starts.
    pub fn start_bp(&self) -> usize {
        self.start_seg
    }

    /// Break-point ordinal where the run ends.
    pub fn end_bp(&self, n_segments: usize) -> usize {
        (self.start_seg + self.seg_count) % n_segments
    }

    /// Segment ordinals covered, in contour order.
    pub fn segments(&self, n_segments: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.seg_count).map(move |k| (self.start_seg + k) % n_segments)
    }
}

/// Sum of turning angles between consecutive segment chords. Each chord is
/// `(start, end)`; a closed run also counts the junction from the last chord
/// back to the first.
pub fn gs_complexity<T: Real>(chords: &[(Point<T>, Point<T>)], closed: bool) -> Result<T> {
    let mut c = T::zero();
    let n = chords.len();
    let junctions = if closed { n } else { n.saturating_sub(1) };
    for l in 0..junctions {
        let a = chords[l];
        let b = chords[(l + 1) % n];
        c += T::lit(180.0) - angle_at(a.0, a.1, b.1)?;
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct GsCatalog<T> {
    pub gss: Vec<GroupOfSegments<T>>,
    pub n_segments: usize,
    index: HashMap<(usize, usize), usize>,
}

impl<T: Real> GsCatalog<T> {
    /// Number of enumerated GSs.
    pub fn len(&self) -> usize {
        self.gss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gss.is_empty()
    }

    /// Open GS from break-point `start` to break-point `end`, or the closed
    /// GS starting at `start` when `start == end`.
    pub fn get(&self, start: usize, end: usize) -> Option<&GroupOfSegments<T>> {
        self.index.get(&(start, end)).map(|&i| &self.gss[i])
    }

    pub fn position(&self, start: usize, end: usize) -> Option<usize> {
        self.index.get(&(start, end)).copied()
    }

    pub fn from_gss(gss: Vec<GroupOfSegments<T>>, n_segments: usize) -> Self {
        let index = gss
            .iter()
            .enumerate()
            .map(|(i, g)| ((g.start_bp(), g.end_bp(n_segments)), i))
            .collect();
        Self {
            gss,
            n_segments,
            index,
        }
    }
}

/// Every run between two break-points with complexity in `[c_min, c_max]`,
/// plus all single segments, plus the closed whole-contour run from each
/// break-point when its complexity does not exceed `c_max`.
pub fn enumerate_gs<T: Real>(
    contour: &Contour<T>,
    segments: &[Segment<T>],
    p: &CostParams<T>,
) -> Result<GsCatalog<T>> {
    let n = segments.len();
    let total = contour.len();
    let chords: Vec<(Point<T>, Point<T>)> = segments
        .iter()
        .map(|s| (contour.at(s.start_bp.index), contour.at(s.end_bp.index)))
        .collect();
    let mut gss = Vec::new();
    for start in 0..n {
        let mut complexity = T::zero();
        let mut point_count = 0usize;
        for count in 1..=n {
            let last = (start + count - 1) % n;
            point_count += segments[last].point_count;
            let closed = count == n;
            if count > 1 {
                let prev = chords[(start + count - 2) % n];
                let cur = chords[last];
                complexity += T::lit(180.0) - angle_at(prev.0, prev.1, cur.1)?;
            }
            let c_total = if closed && n > 1 {
                let wrap = chords[(start + n - 1) % n];
                let first = chords[start];
                complexity + (T::lit(180.0) - angle_at(wrap.0, wrap.1, first.1)?)
            } else {
                complexity
            };
            if c_total > p.c_max && !closed {
                // complexity only grows along a run
                break;
            }
            let keep = if closed {
                c_total <= p.c_max
            } else {
                count == 1 || (c_total >= p.c_min && c_total <= p.c_max)
            };
            if !keep {
                continue;
            }
            let sp = segments[start].start_bp.index;
            let ep = segments[last].end_bp.index;
            let points: Vec<Point<T>> = if closed {
                (0..total).map(|k| contour.at(sp.offset(k as isize, total))).collect()
            } else {
                (0..=point_count)
                    .map(|k| contour.at(sp.offset(k as isize, total)))
                    .collect()
            };
            let midpoint = if closed {
                let mut ring = points.clone();
                ring.push(points[0]);
                arc_midpoint(&ring)
            } else {
                arc_midpoint(&points)
            };
            gss.push(GroupOfSegments {
                start_seg: start,
                end_seg: last,
                seg_count: count,
                point_count,
                weight: T::from_count(point_count) / T::from_count(total),
                complexity: c_total,
                points,
                is_closed: closed,
                start_point: sp,
                end_point: ep,
                midpoint,
            });
        }
    }
    Ok(GsCatalog::from_gss(gss, n))
}
