//! Batch matching of many shape pairs.
//!
//! Distance transforms dominate memory (tens of megabytes per shape), so each
//! shape's transforms exist only during its own step. Step `t` scores every
//! partner's edge maps against shape `t`; the partner's opposite direction
//! was scored at the partner's step if it came earlier, in which case the
//! pair is complete and matched right away. Otherwise the table waits, as
//! integers, for the partner's step.

use std::collections::{BTreeSet, HashMap};

use gsmatch_core::contour::Contour;
use gsmatch_core::dp::{match_shapes, MatchResult};
use gsmatch_core::params::CostParams;
use gsmatch_core::shape::{build_transforms, CdcTable, DirectedTable, ShapeBundle};
use rayon::prelude::*;

use crate::cache::{shape_key, Cache};
use crate::error::Result;

/// Resamples, detects break-points (or takes them from the cache) and
/// prepares every GS of each contour.
pub fn prepare(contours: &[&Contour<f64>], p: &CostParams<f64>, cache: Option<&Cache>) -> Vec<Result<ShapeBundle<f64>>> {
    contours
        .par_iter()
        .map(|c| {
            let Some(cache) = cache else {
                return Ok(ShapeBundle::build(c, p)?);
            };
            let key = shape_key(c, p);
            if let Some(bps) = cache.load_breakpoints(&key) {
                let resampled = c.resample(p.contour_points)?;
                if let Ok(b) = ShapeBundle::from_breakpoints(resampled, bps, p) {
                    return Ok(b);
                }
            }
            let b = ShapeBundle::build(c, p)?;
            cache.store_breakpoints(&key, &b.breakpoints)?;
            Ok(b)
        })
        .collect()
}

/// Matches every requested ordered pair `(a, b)` (the first shape's contour
/// is the one whose cut is searched) and hands each result to `sink`, in
/// completion order.
pub fn match_pairs(
    bundles: &[&ShapeBundle<f64>],
    pairs: &[(usize, usize)],
    p: &CostParams<f64>,
    mut sink: impl FnMut(usize, usize, MatchResult<f64>),
) -> Result<()> {
    let n = bundles.len();
    // orientations requested per unordered pair
    let mut wanted: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut partners: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in pairs {
        let key = (a.min(b), a.max(b));
        let list = wanted.entry(key).or_default();
        if !list.contains(&(a, b)) {
            list.push((a, b));
        }
        partners[a].insert(b);
        partners[b].insert(a);
    }
    // (query, target) -> query edges scored against target transforms
    let mut pending: HashMap<(usize, usize), DirectedTable> = HashMap::new();
    for t in 0..n {
        if partners[t].is_empty() {
            continue;
        }
        let dts = build_transforms(&bundles[t].edges, p);
        let mut ready = Vec::new();
        for &q in &partners[t] {
            let q_to_t = DirectedTable::compute(&bundles[q].edges, &dts)?;
            if q > t {
                pending.insert((q, t), q_to_t);
            } else if q == t {
                ready.push((t, q_to_t.clone(), q_to_t));
            } else {
                let t_to_q = pending
                    .remove(&(t, q))
                    .expect("earlier partner scored this shape");
                ready.push((q, q_to_t, t_to_q));
            }
        }
        drop(dts);
        let results: Vec<Result<Vec<(usize, usize, MatchResult<f64>)>>> = ready
            .into_par_iter()
            .map(|(q, q_to_t, t_to_q)| {
                let lo_hi = CdcTable::from_directed(&q_to_t, &t_to_q, p)?;
                let mut out = Vec::new();
                for &(a, b) in &wanted[&(q, t)] {
                    let r = if a == q {
                        match_shapes(bundles[a], bundles[b], &lo_hi, p)
                    } else {
                        match_shapes(bundles[a], bundles[b], &lo_hi.transposed(), p)
                    };
                    out.push((a, b, r));
                }
                Ok(out)
            })
            .collect();
        for r in results {
            for (a, b, m) in r? {
                sink(a, b, m);
            }
        }
        log::debug!("step {t}/{n}: {} tables pending", pending.len());
    }
    Ok(())
}
