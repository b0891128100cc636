//! Order-preserving GS correspondence by dynamic programming over segment
//! counts, plus an exact search used to check it on small instances.
//!
//! Both contours are cut at a break-point and read as linear sequences of
//! segments. Cell `(i, j)` holds the cheapest way found to consume the first
//! `i` segments of one shape and `j` of the other, together with the last
//! matched pair on that path (needed by the binary term). Keeping only one
//! path per cell is what makes the table approximate: a costlier prefix with
//! a better-suited last pair can be discarded.

use crate::cost::{
    binary_cost, floored_complexity, skip_cost, GsInfo, MatchList, MatchPair, SkippedSegment,
};
use crate::error::{Error, Result};
use crate::params::CostParams;
use crate::scalar::Real;
use crate::shape::{CdcTable, ShapeBundle};

/// Largest segment count either shape may have for [`exhaustive_match`].
pub const MAX_EXHAUSTIVE_SEGMENTS: usize = 8;

/// One shape as the matcher sees it.
#[derive(Debug, Clone, Copy)]
pub struct Side<'a, T> {
    /// Per segment, in break-point order.
    pub seg_weights: &'a [T],
    pub gss: &'a [GsInfo<T>],
}

impl<'a, T: Real> Side<'a, T> {
    pub fn new(seg_weights: &'a [T], gss: &'a [GsInfo<T>]) -> Self {
        Self { seg_weights, gss }
    }

    fn n(&self) -> usize {
        self.seg_weights.len()
    }

    /// GSs that fit the cut, grouped by the linear segment count at which
    /// they end: `ends[e]` lists `(gs, seg_count)`.
    fn ends(&self, cut: usize) -> Vec<Vec<(usize, usize)>> {
        let n = self.n();
        let mut ends = vec![Vec::new(); n + 1];
        for (k, g) in self.gss.iter().enumerate() {
            let start = (g.start_seg + n - cut % n) % n;
            if start + g.seg_count <= n {
                ends[start + g.seg_count].push((k, g.seg_count));
            }
        }
        ends
    }

    /// `cum[x]` = skip cost of linear segments `0..x`.
    fn cumulative_skip(&self, cut: usize, p: &CostParams<T>) -> Vec<T> {
        let n = self.n();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(T::zero());
        for k in 0..n {
            let w = self.seg_weights[(cut + k) % n];
            cum.push(cum[k] + skip_cost([w], p));
        }
        cum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Origin,
    SkipA,
    SkipB,
    Match { g1: usize, g2: usize, t: usize, q: usize },
}

#[derive(Debug, Clone, Copy)]
struct Cell<T> {
    cost: T,
    step: Step,
    last: Option<(usize, usize)>,
}

/// Filled table for one pair of cuts.
#[derive(Debug, Clone)]
pub struct DpTable<T> {
    pub rows: usize,
    pub cols: usize,
    pub cut_a: usize,
    pub cut_b: usize,
    cells: Vec<Cell<T>>,
}

impl<T: Real> DpTable<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &Cell<T> {
        &self.cells[i * (self.cols + 1) + j]
    }

    /// Best cost found for the first `i` and `j` linear segments.
    pub fn cost(&self, i: usize, j: usize) -> T {
        self.at(i, j).cost
    }

    pub fn step(&self, i: usize, j: usize) -> Step {
        self.at(i, j).step
    }

    pub fn total(&self) -> T {
        self.cost(self.rows, self.cols)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult<T> {
    pub match_list: MatchList<T>,
    pub cost: T,
    /// Break-point of the first shape at which its contour was cut.
    pub start_offset: usize,
    /// Break-point of the second shape at which its contour was cut.
    pub cut_b: usize,
}

fn unary_parts<T: Real>(gss: &[GsInfo<T>], p: &CostParams<T>) -> Vec<T> {
    gss.iter()
        .map(|g| p.alpha_c / floored_complexity(g.complexity, p))
        .collect()
}

/// Fills the table for the given cuts. `cdc.get(g1, g2)` is the chamfer
/// score between GS `g1` of `a` and GS `g2` of `b`.
pub fn fill_table<T: Real>(
    a: Side<'_, T>,
    cut_a: usize,
    b: Side<'_, T>,
    cut_b: usize,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> DpTable<T> {
    let (m, n) = (a.n(), b.n());
    let ends_a = a.ends(cut_a);
    let ends_b = b.ends(cut_b);
    let ua = unary_parts(a.gss, p);
    let ub = unary_parts(b.gss, p);
    let skip_a: Vec<T> = (0..m).map(|k| skip_cost([a.seg_weights[(cut_a + k) % m]], p)).collect();
    let skip_b: Vec<T> = (0..n).map(|k| skip_cost([b.seg_weights[(cut_b + k) % n]], p)).collect();
    let stride = n + 1;
    let mut cells = vec![
        Cell {
            cost: T::zero(),
            step: Step::Origin,
            last: None,
        };
        (m + 1) * stride
    ];
    for i in 0..=m {
        for j in 0..=n {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best: Option<(Cell<T>, usize)> = None;
            for &(g1, t) in &ends_a[i] {
                for &(g2, q) in &ends_b[j] {
                    if t > i || q > j {
                        continue;
                    }
                    let prev = &cells[(i - t) * stride + (j - q)];
                    let (x, y) = (&a.gss[g1], &b.gss[g2]);
                    let wp = x.weight + y.weight;
                    let mut c = prev.cost + wp * cdc.get(g1, g2) + wp * (ua[g1] + ub[g2]);
                    if let Some((l1, l2)) = prev.last {
                        c += binary_cost(x, y, &a.gss[l1], &b.gss[l2], p);
                    }
                    let better = match &best {
                        None => true,
                        Some((bc, tq)) => c < bc.cost || (c == bc.cost && t + q < *tq),
                    };
                    if better {
                        best = Some((
                            Cell {
                                cost: c,
                                step: Step::Match { g1, g2, t, q },
                                last: Some((g1, g2)),
                            },
                            t + q,
                        ));
                    }
                }
            }
            let mut best = best.map(|(c, _)| c);
            if i > 0 {
                let prev = cells[(i - 1) * stride + j];
                let c = prev.cost + skip_a[i - 1];
                if best.map_or(true, |b| c < b.cost) {
                    best = Some(Cell {
                        cost: c,
                        step: Step::SkipA,
                        last: prev.last,
                    });
                }
            }
            if j > 0 {
                let prev = cells[i * stride + j - 1];
                let c = prev.cost + skip_b[j - 1];
                if best.map_or(true, |b| c < b.cost) {
                    best = Some(Cell {
                        cost: c,
                        step: Step::SkipB,
                        last: prev.last,
                    });
                }
            }
            cells[i * stride + j] = best.expect("every non-origin cell has a skip move");
        }
    }
    DpTable {
        rows: m,
        cols: n,
        cut_a,
        cut_b,
        cells,
    }
}

fn skipped<T: Real>(side: Side<'_, T>, cut: usize, linear: usize) -> SkippedSegment<T> {
    let index = (cut + linear) % side.n();
    SkippedSegment {
        index,
        weight: side.seg_weights[index],
    }
}

/// Follows the stored moves back from the full cell.
pub fn backtrack<T: Real>(
    table: &DpTable<T>,
    a: Side<'_, T>,
    b: Side<'_, T>,
    cdc: &CdcTable<T>,
) -> MatchResult<T> {
    let (mut i, mut j) = (table.rows, table.cols);
    let mut pairs = Vec::new();
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    loop {
        match table.step(i, j) {
            Step::Origin => break,
            Step::SkipA => {
                i -= 1;
                s1.push(skipped(a, table.cut_a, i));
            }
            Step::SkipB => {
                j -= 1;
                s2.push(skipped(b, table.cut_b, j));
            }
            Step::Match { g1, g2, t, q } => {
                pairs.push(MatchPair {
                    gs1: a.gss[g1].clone(),
                    gs2: b.gss[g2].clone(),
                    c_dc: cdc.get(g1, g2),
                });
                i -= t;
                j -= q;
            }
        }
    }
    pairs.reverse();
    s1.reverse();
    s2.reverse();
    MatchResult {
        match_list: MatchList {
            pairs,
            skipped1: s1,
            skipped2: s2,
            n_segments1: table.rows,
            n_segments2: table.cols,
            total_cost: table.total(),
        },
        cost: table.total(),
        start_offset: table.cut_a,
        cut_b: table.cut_b,
    }
}

/// DP match with both contours cut at the given break-points.
pub fn match_cut<T: Real>(
    a: Side<'_, T>,
    cut_a: usize,
    b: Side<'_, T>,
    cut_b: usize,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> MatchResult<T> {
    let table = fill_table(a, cut_a, b, cut_b, cdc, p);
    backtrack(&table, a, b, cdc)
}

/// Lowest-cost DP match over every cut of `a`, with `b` cut at its first
/// break-point. Ties keep the smallest cut.
pub fn match_cyclic<T: Real>(a: Side<'_, T>, b: Side<'_, T>, cdc: &CdcTable<T>, p: &CostParams<T>) -> MatchResult<T> {
    let mut best: Option<DpTable<T>> = None;
    for cut in 0..a.n() {
        let t = fill_table(a, cut, b, 0, cdc, p);
        if best.as_ref().map_or(true, |bt| t.total() < bt.total()) {
            best = Some(t);
        }
    }
    backtrack(&best.expect("at least one segment"), a, b, cdc)
}

/// Exact minimum over every order-preserving match list for the given cuts.
///
/// Each candidate pair `P` gets `F(P)`, the cheapest cost of a list ending in
/// `P` including skips before it. Writing `K(P') = F(P') - skip(0..end(P'))`
/// for both shapes, `F(P) = unary(P) + skip(0..start(P)) + min(0, min K(P') +
/// binary(P', P))` over compatible predecessors. Predecessors are visited in
/// increasing `K`; binary costs are non-negative, so the scan stops once `K`
/// alone cannot improve on the best value found.
pub fn exact_cut<T: Real>(
    a: Side<'_, T>,
    cut_a: usize,
    b: Side<'_, T>,
    cut_b: usize,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> MatchResult<T> {
    let (m, n) = (a.n(), b.n());
    let cum_a = a.cumulative_skip(cut_a, p);
    let cum_b = b.cumulative_skip(cut_b, p);
    let ua = unary_parts(a.gss, p);
    let ub = unary_parts(b.gss, p);
    // (g, start, end) in linear coordinates
    let span = |side: Side<'_, T>, cut: usize| -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for (e, list) in side.ends(cut).iter().enumerate() {
            for &(g, c) in list {
                v.push((g, e - c, e));
            }
        }
        v
    };
    let sa = span(a, cut_a);
    let sb = span(b, cut_b);
    struct Cand<T> {
        g1: usize,
        g2: usize,
        s1: usize,
        e1: usize,
        s2: usize,
        e2: usize,
        f: T,
        k: T,
        pred: Option<usize>,
    }
    let mut cands: Vec<Cand<T>> = Vec::with_capacity(sa.len() * sb.len());
    for &(g1, s1, e1) in &sa {
        for &(g2, s2, e2) in &sb {
            cands.push(Cand {
                g1,
                g2,
                s1,
                e1,
                s2,
                e2,
                f: T::zero(),
                k: T::zero(),
                pred: None,
            });
        }
    }
    cands.sort_by_key(|c| (c.s1, c.s2));
    let mut done: Vec<usize> = Vec::new();
    let mut group_start = 0;
    while group_start < cands.len() {
        let s1 = cands[group_start].s1;
        let mut group_end = group_start;
        while group_end < cands.len() && cands[group_end].s1 == s1 {
            group_end += 1;
        }
        // every candidate of earlier groups starts before s1 and is final
        done.extend(done.len()..group_start);
        done.sort_by(|&x, &y| cands[x].k.partial_cmp(&cands[y].k).expect("finite costs"));
        for idx in group_start..group_end {
            let (g1, g2, s2) = (cands[idx].g1, cands[idx].g2, cands[idx].s2);
            let (x, y) = (&a.gss[g1], &b.gss[g2]);
            let mut best = T::zero();
            let mut pred = None;
            for &d in &done {
                let c = &cands[d];
                if c.k >= best {
                    break;
                }
                if c.e1 > s1 || c.e2 > s2 {
                    continue;
                }
                let v = c.k + binary_cost(x, y, &a.gss[c.g1], &b.gss[c.g2], p);
                if v < best {
                    best = v;
                    pred = Some(d);
                }
            }
            let wp = x.weight + y.weight;
            let unary = wp * cdc.get(g1, g2) + wp * (ua[g1] + ub[g2]);
            let f = unary + cum_a[s1] + cum_b[s2] + best;
            let cand = &mut cands[idx];
            cand.f = f;
            cand.k = f - cum_a[cand.e1] - cum_b[cand.e2];
            cand.pred = pred;
        }
        group_start = group_end;
    }
    let mut total = cum_a[m] + cum_b[n];
    let mut last = None;
    for (k, c) in cands.iter().enumerate() {
        let v = c.f + (cum_a[m] - cum_a[c.e1]) + (cum_b[n] - cum_b[c.e2]);
        if v < total {
            total = v;
            last = Some(k);
        }
    }
    let mut chain = Vec::new();
    while let Some(k) = last {
        chain.push(k);
        last = cands[k].pred;
    }
    chain.reverse();
    let mut covered_a = vec![false; m];
    let mut covered_b = vec![false; n];
    let pairs = chain
        .iter()
        .map(|&k| {
            let c = &cands[k];
            covered_a[c.s1..c.e1].iter_mut().for_each(|v| *v = true);
            covered_b[c.s2..c.e2].iter_mut().for_each(|v| *v = true);
            MatchPair {
                gs1: a.gss[c.g1].clone(),
                gs2: b.gss[c.g2].clone(),
                c_dc: cdc.get(c.g1, c.g2),
            }
        })
        .collect();
    let skipped1 = (0..m).filter(|&k| !covered_a[k]).map(|k| skipped(a, cut_a, k)).collect();
    let skipped2 = (0..n).filter(|&k| !covered_b[k]).map(|k| skipped(b, cut_b, k)).collect();
    MatchResult {
        match_list: MatchList {
            pairs,
            skipped1,
            skipped2,
            n_segments1: m,
            n_segments2: n,
            total_cost: total,
        },
        cost: total,
        start_offset: cut_a,
        cut_b,
    }
}

/// Exact counterpart of [`match_cyclic`].
pub fn exact_cyclic<T: Real>(a: Side<'_, T>, b: Side<'_, T>, cdc: &CdcTable<T>, p: &CostParams<T>) -> MatchResult<T> {
    let mut best: Option<MatchResult<T>> = None;
    for cut in 0..a.n() {
        let r = exact_cut(a, cut, b, 0, cdc, p);
        if best.as_ref().map_or(true, |b| r.cost < b.cost) {
            best = Some(r);
        }
    }
    best.expect("at least one segment")
}

fn sides<'a, T: Real>(
    a: &'a ShapeBundle<T>,
    wa: &'a [T],
    b: &'a ShapeBundle<T>,
    wb: &'a [T],
) -> (Side<'a, T>, Side<'a, T>) {
    (Side::new(wa, &a.infos), Side::new(wb, &b.infos))
}

/// Match with both shapes cut at their first break-point.
pub fn match_aligned<T: Real>(
    a: &ShapeBundle<T>,
    b: &ShapeBundle<T>,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> MatchResult<T> {
    let (wa, wb) = (a.seg_weights(), b.seg_weights());
    let (sa, sb) = sides(a, &wa, b, &wb);
    match_cut(sa, 0, sb, 0, cdc, p)
}

/// Best match over all cuts of `a`.
pub fn match_shapes<T: Real>(
    a: &ShapeBundle<T>,
    b: &ShapeBundle<T>,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> MatchResult<T> {
    let (wa, wb) = (a.seg_weights(), b.seg_weights());
    let (sa, sb) = sides(a, &wa, b, &wb);
    match_cyclic(sa, sb, cdc, p)
}

/// Computes the chamfer table and matches.
pub fn match_bundles<T: Real>(a: &ShapeBundle<T>, b: &ShapeBundle<T>, p: &CostParams<T>) -> Result<MatchResult<T>> {
    let cdc = CdcTable::compute(a, b, p)?;
    Ok(match_shapes(a, b, &cdc, p))
}

/// Exact minimum over the same search space as [`match_shapes`]. Only for
/// shapes with at most [`MAX_EXHAUSTIVE_SEGMENTS`] segments.
pub fn exhaustive_match<T: Real>(
    a: &ShapeBundle<T>,
    b: &ShapeBundle<T>,
    cdc: &CdcTable<T>,
    p: &CostParams<T>,
) -> Result<MatchResult<T>> {
    let worst = a.n_segments().max(b.n_segments());
    if worst > MAX_EXHAUSTIVE_SEGMENTS {
        return Err(Error::InstanceTooLarge(worst, MAX_EXHAUSTIVE_SEGMENTS));
    }
    let (wa, wb) = (a.seg_weights(), b.seg_weights());
    let (sa, sb) = sides(a, &wa, b, &wb);
    Ok(exact_cyclic(sa, sb, cdc, p))
}
