//! Plain-text rendering of a match.

use std::fmt::Write as _;

use crate::cost::{binary_cost, unary_cost, MatchList};
use crate::dp::MatchResult;
use crate::params::CostParams;
use crate::scalar::Real;

/// Cost each pair adds to the total: its unary term plus the binary term
/// against the pair before it.
pub fn pair_contributions<T: Real>(ml: &MatchList<T>, p: &CostParams<T>) -> Vec<T> {
    ml.pairs
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let mut c = unary_cost(&m.gs1, &m.gs2, m.c_dc, p);
            if k > 0 {
                let prev = &ml.pairs[k - 1];
                c += binary_cost(&m.gs1, &m.gs2, &prev.gs1, &prev.gs2, p);
            }
            c
        })
        .collect()
}

fn join(v: impl Iterator<Item = usize>) -> String {
    v.map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// `key=value` header lines, then one `(bp_i..bp_j) <-> (bp_l..bp_m)` line
/// per pair with its cost contribution. Break-points are ordinals.
pub fn format_report<T: Real>(r: &MatchResult<T>, p: &CostParams<T>) -> String {
    let ml = &r.match_list;
    let mut s = String::new();
    let _ = writeln!(s, "total_cost={:.6}", r.cost.as_f64());
    let _ = writeln!(s, "start_offset={}", r.start_offset);
    let _ = writeln!(s, "segments_a={}", ml.n_segments1);
    let _ = writeln!(s, "segments_b={}", ml.n_segments2);
    let _ = writeln!(s, "pairs={}", ml.pairs.len());
    for (m, c) in ml.pairs.iter().zip(pair_contributions(ml, p)) {
        let _ = writeln!(
            s,
            "({}..{}) <-> ({}..{}) c_dc={:.4} cost={:.6}",
            m.gs1.start_seg,
            (m.gs1.start_seg + m.gs1.seg_count) % ml.n_segments1,
            m.gs2.start_seg,
            (m.gs2.start_seg + m.gs2.seg_count) % ml.n_segments2,
            m.c_dc.as_f64(),
            c.as_f64()
        );
    }
    let _ = writeln!(s, "skipped_a={}", join(ml.skipped1.iter().map(|k| k.index)));
    let _ = writeln!(s, "skipped_b={}", join(ml.skipped2.iter().map(|k| k.index)));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{match_list_cost, skip_cost, GsInfo, MatchPair, SkippedSegment};
    use crate::geometry::Point;

    #[test]
    fn report_lists_pairs_and_skips() {
        let p = CostParams::default();
        let g = |s: usize, c: usize| GsInfo {
            start_seg: s,
            seg_count: c,
            point_count: 25 * c,
            weight: 0.25 * c as f64,
            complexity: 90.0,
            start: Point::new(0.0, 0.0),
            end: Point::new(1.0, s as f64),
            mid: Point::new(0.5, 2.0),
            is_closed: false,
        };
        let ml = MatchList {
            pairs: vec![
                MatchPair { gs1: g(0, 2), gs2: g(1, 1), c_dc: 1.0 },
                MatchPair { gs1: g(3, 1), gs2: g(2, 2), c_dc: 2.5 },
            ],
            skipped1: vec![SkippedSegment { index: 2, weight: 0.25 }],
            skipped2: vec![SkippedSegment { index: 0, weight: 0.25 }],
            n_segments1: 4,
            n_segments2: 4,
            total_cost: 0.0,
        };
        let cost = match_list_cost(&ml, &p).unwrap();
        let r = MatchResult {
            match_list: ml.clone(),
            cost,
            start_offset: 0,
            cut_b: 0,
        };
        let text = format_report(&r, &p);
        assert!(text.contains("pairs=2\n"));
        assert!(text.contains("(0..2) <-> (1..2)"));
        assert!(text.contains("(3..0) <-> (2..0)"));
        assert!(text.contains("skipped_a=2\n"));
        assert!(text.contains("skipped_b=0\n"));
        let parts: f64 = pair_contributions(&ml, &p).iter().sum::<f64>() + skip_cost([0.25, 0.25], &p);
        assert!((parts - cost).abs() < 1e-9);
    }
}
