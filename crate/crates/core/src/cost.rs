//! Unary, binary and skip costs, and the total cost of a match list.

use crate::error::{Error, Result};
use crate::geometry::{vector_angle, Point};
use crate::gs::GroupOfSegments;
use crate::params::CostParams;
use crate::scalar::Real;

/// What the cost model needs to know about a GS. Geometry is in the
/// original (un-normalized) frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GsInfo<T> {
    pub start_seg: usize,
    pub seg_count: usize,
    pub point_count: usize,
    pub weight: T,
    pub complexity: T,
    pub start: Point<T>,
    pub end: Point<T>,
    pub mid: Point<T>,
    pub is_closed: bool,
}

impl<T: Real> From<&GroupOfSegments<T>> for GsInfo<T> {
    fn from(g: &GroupOfSegments<T>) -> Self {
        Self {
            start_seg: g.start_seg,
            seg_count: g.seg_count,
            point_count: g.point_count,
            weight: g.weight,
            complexity: g.complexity,
            start: g.start(),
            end: g.end(),
            mid: g.midpoint,
            is_closed: g.is_closed,
        }
    }
}

/// Complexity with the floor applied.
pub fn floored_complexity<T: Real>(c: T, p: &CostParams<T>) -> T {
    c.max(p.complexity_floor)
}

/// `w_p * c_dc + w_p * (alpha_c / C'(a) + alpha_c / C'(b))`, `w_p = w_a + w_b`.
pub fn unary_cost<T: Real>(a: &GsInfo<T>, b: &GsInfo<T>, c_dc: T, p: &CostParams<T>) -> T {
    let wp = a.weight + b.weight;
    let complexity =
        p.alpha_c / floored_complexity(a.complexity, p) + p.alpha_c / floored_complexity(b.complexity, p);
    wp * c_dc + wp * complexity
}

/// Angles (degrees) describing how `cur` continues from `prev` in one shape.
///
/// `theta1` is the angle between the two chords, `theta2` the angle between
/// the directions from the junction into each GS (towards its arc midpoint).
/// When the two GSs are not adjacent (segments were skipped between them)
/// each GS contributes its own junction end, which reduces to the shared
/// break-point when they touch.
pub fn junction_angles<T: Real>(prev: &GsInfo<T>, cur: &GsInfo<T>) -> Result<(T, T)> {
    let t1 = vector_angle(prev.end - prev.start, cur.end - cur.start)?;
    let t2 = vector_angle(prev.mid - prev.end, cur.mid - cur.start)?;
    Ok((t1, t2))
}

/// Scale and angle consistency between consecutive pairs.
pub fn binary_cost<T: Real>(
    cur1: &GsInfo<T>,
    cur2: &GsInfo<T>,
    prev1: &GsInfo<T>,
    prev2: &GsInfo<T>,
    p: &CostParams<T>,
) -> T {
    let w_ip = prev1.weight + cur1.weight + prev2.weight + cur2.weight;
    let ratio = |prev: &GsInfo<T>, cur: &GsInfo<T>| {
        T::from_count(prev.point_count) / T::from_count(cur.point_count)
    };
    let ds = (ratio(prev1, cur1) - ratio(prev2, cur2)).abs();
    let dtheta = match (junction_angles(prev1, cur1), junction_angles(prev2, cur2)) {
        (Ok((a1, a2)), Ok((b1, b2))) => (a1 - b1).abs().max((a2 - b2).abs()),
        // undefined junction geometry counts as maximal disagreement
        _ => T::lit(180.0),
    };
    binary_from_deltas(ds, dtheta, w_ip, p)
}

/// The binary cost for given `Δs`, `Δθ` (degrees) and `w_ip`.
pub fn binary_from_deltas<T: Real>(ds: T, dtheta: T, w_ip: T, p: &CostParams<T>) -> T {
    let cs = p.alpha_s * w_ip * (T::one() - (-p.beta_s * ds).exp());
    let ca = p.alpha_a * w_ip * (T::one() - (-p.beta_a * dtheta).exp());
    cs + ca
}

/// `beta_skip` times the summed weight of the skipped segments.
pub fn skip_cost<T: Real>(weights: impl IntoIterator<Item = T>, p: &CostParams<T>) -> T {
    p.beta_skip * weights.into_iter().fold(T::zero(), |a, w| a + w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchPair<T> {
    pub gs1: GsInfo<T>,
    pub gs2: GsInfo<T>,
    pub c_dc: T,
}

impl<T: Real> MatchPair<T> {
    /// `w_p = w_1 + w_2`.
    pub fn pair_weight(&self) -> T {
        self.gs1.weight + self.gs2.weight
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkippedSegment<T> {
    pub index: usize,
    pub weight: T,
}

/// Ordered GS correspondences plus the segments left unmatched on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchList<T> {
    pub pairs: Vec<MatchPair<T>>,
    pub skipped1: Vec<SkippedSegment<T>>,
    pub skipped2: Vec<SkippedSegment<T>>,
    pub n_segments1: usize,
    pub n_segments2: usize,
    pub total_cost: T,
}

impl<T: Real> MatchList<T> {
    /// Same correspondences seen from the other shape.
    pub fn swapped(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|m| MatchPair {
                    gs1: m.gs2.clone(),
                    gs2: m.gs1.clone(),
                    c_dc: m.c_dc,
                })
                .collect(),
            skipped1: self.skipped2.clone(),
            skipped2: self.skipped1.clone(),
            n_segments1: self.n_segments2,
            n_segments2: self.n_segments1,
            total_cost: self.total_cost,
        }
    }
}

/// Checks one side: GSs appear in cyclic contour order without overlap and,
/// together with the skipped segments, cover every segment exactly once.
fn validate_side<'a, T: Real>(
    gss: impl Iterator<Item = &'a GsInfo<T>>,
    skipped: &[SkippedSegment<T>],
    n: usize,
    side: usize,
) -> Result<()> {
    let bad = |what: String| Err(Error::InvalidMatchList(format!("shape {side}: {what}")));
    let mut covered = vec![false; n];
    let mut first: Option<usize> = None;
    let mut reach = 0usize;
    for g in gss {
        if g.seg_count == 0 || g.seg_count > n || g.start_seg >= n {
            return bad(format!("GS ({}, {}) out of range", g.start_seg, g.seg_count));
        }
        let base = *first.get_or_insert(g.start_seg);
        let rel = (g.start_seg + n - base) % n;
        if rel < reach {
            return bad("GSs overlap or break contour order".into());
        }
        reach = rel + g.seg_count;
        if reach > n {
            return bad("GSs wrap past the first match".into());
        }
        for k in 0..g.seg_count {
            covered[(g.start_seg + k) % n] = true;
        }
    }
    for s in skipped {
        if s.index >= n || covered[s.index] {
            return bad(format!("segment {} skipped twice, matched, or out of range", s.index));
        }
        covered[s.index] = true;
    }
    if let Some(k) = covered.iter().position(|&c| !c) {
        return bad(format!("segment {k} neither matched nor skipped"));
    }
    Ok(())
}

pub fn validate_match_list<T: Real>(ml: &MatchList<T>) -> Result<()> {
    validate_side(ml.pairs.iter().map(|m| &m.gs1), &ml.skipped1, ml.n_segments1, 1)?;
    validate_side(ml.pairs.iter().map(|m| &m.gs2), &ml.skipped2, ml.n_segments2, 2)
}

/// Unary cost of every pair, binary cost between each pair and the one
/// before it (none before the first), plus both skip costs.
pub fn match_list_cost<T: Real>(ml: &MatchList<T>, p: &CostParams<T>) -> Result<T> {
    validate_match_list(ml)?;
    let mut total = T::zero();
    for (k, m) in ml.pairs.iter().enumerate() {
        total += unary_cost(&m.gs1, &m.gs2, m.c_dc, p);
        if k > 0 {
            let prev = &ml.pairs[k - 1];
            total += binary_cost(&m.gs1, &m.gs2, &prev.gs1, &prev.gs2, p);
        }
    }
    total += skip_cost(ml.skipped1.iter().map(|s| s.weight), p);
    total += skip_cost(ml.skipped2.iter().map(|s| s.weight), p);
    Ok(total)
}
