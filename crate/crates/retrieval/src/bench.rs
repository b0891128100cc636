//! Distance matrices over a dataset and query-versus-database matching.

use std::collections::HashMap;

use gsmatch_core::contour::Contour;
use gsmatch_core::dp::MatchResult;
use gsmatch_core::params::CostParams;
use gsmatch_core::shape::ShapeBundle;

use crate::cache::{shape_key, Cache};
use crate::dataset::Entry;
use crate::engine::{match_pairs, prepare};
use crate::error::Result;
use crate::matrix::DistanceMatrix;

/// Results between cache flushes.
const FLUSH_EVERY: usize = 512;

/// Bundles for every contour; failures are logged and left as `None`.
pub fn prepare_all(contours: &[&Contour<f64>], names: &[String], p: &CostParams<f64>, cache: Option<&Cache>) -> Vec<Option<ShapeBundle<f64>>> {
    prepare(contours, p, cache)
        .into_iter()
        .zip(names)
        .map(|(r, name)| match r {
            Ok(b) => Some(b),
            Err(e) => {
                log::warn!("{name}: {e}");
                None
            }
        })
        .collect()
}

/// Pairwise match costs of all entries. Each unordered pair is matched once,
/// with the earlier entry's cut searched, and mirrored. Shapes that fail to
/// prepare get `NaN` rows. With a cache, finished pairs are stored as they
/// complete and skipped on the next run.
pub fn distance_matrix(entries: &[Entry], p: &CostParams<f64>, cache: Option<&Cache>) -> Result<DistanceMatrix> {
    let contours: Vec<&Contour<f64>> = entries.iter().map(|e| &e.contour).collect();
    let ids: Vec<String> = entries.iter().map(|e| e.id.clone()).collect();
    let keys: Vec<String> = contours.iter().map(|c| shape_key(c, p)).collect();
    let mut known = cache.map(Cache::load_costs).unwrap_or_default();
    let bundles = prepare_all(&contours, &ids, p, cache);
    let n = entries.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            let both = bundles[i].is_some() && bundles[j].is_some();
            if both && !known.contains_key(&(keys[i].clone(), keys[j].clone())) {
                pairs.push((i, j));
            }
        }
    }
    log::info!("{} shapes, {} pairs to match", n, pairs.len());
    // failed shapes stand in as empty slots the engine never touches
    let live: Vec<usize> = (0..n).filter(|&k| bundles[k].is_some()).collect();
    let slot: HashMap<usize, usize> = live.iter().enumerate().map(|(s, &k)| (k, s)).collect();
    let refs: Vec<&ShapeBundle<f64>> = live.iter().map(|&k| bundles[k].as_ref().unwrap()).collect();
    let local: Vec<(usize, usize)> = pairs.iter().map(|(i, j)| (slot[i], slot[j])).collect();
    let mut done = 0usize;
    let mut flush_error = None;
    match_pairs(&refs, &local, p, |a, b, r| {
        let (i, j) = (live[a], live[b]);
        known.insert((keys[i].clone(), keys[j].clone()), r.cost);
        done += 1;
        if let Some(c) = cache {
            if done % FLUSH_EVERY == 0 {
                if let Err(e) = c.store_costs(&known) {
                    flush_error.get_or_insert(e);
                }
            }
        }
    })?;
    if let Some(e) = flush_error {
        return Err(e);
    }
    if let Some(c) = cache {
        c.store_costs(&known)?;
    }
    let mut dm = DistanceMatrix::new(ids);
    for i in 0..n {
        for j in i..n {
            if let Some(&v) = known.get(&(keys[i].clone(), keys[j].clone())) {
                if bundles[i].is_some() && bundles[j].is_some() {
                    dm.set_symmetric(i, j, v);
                }
            }
        }
    }
    Ok(dm)
}

/// Matches each query against the database shapes for which `wanted(q, d)`
/// holds, with the query's cut searched. Entries are `None` where not wanted
/// or where either shape failed to prepare.
pub fn match_queries(
    queries: &[Option<ShapeBundle<f64>>],
    db: &[Option<ShapeBundle<f64>>],
    wanted: impl Fn(usize, usize) -> bool,
    p: &CostParams<f64>,
) -> Result<Vec<Vec<Option<MatchResult<f64>>>>> {
    let mut out = vec![vec![None; db.len()]; queries.len()];
    let mut refs = Vec::new();
    let mut origin = Vec::new();
    for (k, b) in db.iter().enumerate() {
        if let Some(b) = b {
            refs.push(b);
            origin.push((false, k));
        }
    }
    let db_slots = refs.len();
    for (k, b) in queries.iter().enumerate() {
        if let Some(b) = b {
            refs.push(b);
            origin.push((true, k));
        }
    }
    let mut pairs = Vec::new();
    for qs in db_slots..refs.len() {
        for ds in 0..db_slots {
            if wanted(origin[qs].1, origin[ds].1) {
                pairs.push((qs, ds));
            }
        }
    }
    match_pairs(&refs, &pairs, p, |a, b, r| {
        out[origin[a].1][origin[b].1] = Some(r);
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, Deformation, ShapeClass};
    use gsmatch_core::dp::match_bundles;

    fn entries() -> Vec<Entry> {
        generate(&[ShapeClass::Circle, ShapeClass::Square, ShapeClass::Star], 2, 11, &Deformation::default())
            .unwrap()
            .into_iter()
            .map(|(id, label, contour)| Entry { id, label, contour })
            .collect()
    }

    #[test]
    fn matrix_is_symmetric_and_resumable() {
        let p = CostParams::default();
        let e = entries();
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let fresh = distance_matrix(&e, &p, Some(&cache)).unwrap();
        assert_eq!(fresh.asymmetry(), 0.0);
        assert!(fresh.valid().iter().all(|&v| v));
        let b0 = ShapeBundle::build(&e[0].contour, &p).unwrap();
        let b3 = ShapeBundle::build(&e[3].contour, &p).unwrap();
        assert_eq!(fresh.get(3, 0), match_bundles(&b0, &b3, &p).unwrap().cost);
        // a second run reads every pair back from the cache
        let again = distance_matrix(&e, &p, Some(&cache)).unwrap();
        assert_eq!(fresh, again);
        assert_eq!(distance_matrix(&e, &p, None).unwrap(), fresh);
    }

    #[test]
    fn failed_shapes_get_nan_rows() {
        let p = CostParams::default();
        let mut e = entries();
        e.truncate(3);
        // flat: no area to normalize
        e[1].contour = Contour::new(vec![
            gsmatch_core::geometry::Point::new(0.0, 0.0),
            gsmatch_core::geometry::Point::new(10.0, 0.0),
            gsmatch_core::geometry::Point::new(20.0, 0.0),
        ])
        .unwrap();
        assert!(ShapeBundle::build(&e[1].contour, &p).is_err());
        let dm = distance_matrix(&e, &p, None).unwrap();
        assert_eq!(dm.valid(), vec![true, false, true]);
        assert!(dm.get(0, 2).is_finite());
    }

    #[test]
    fn queries_skip_unwanted_pairs() {
        let p = CostParams::default();
        let e = entries();
        let all: Vec<Option<ShapeBundle<f64>>> = e.iter().map(|x| ShapeBundle::build(&x.contour, &p).ok()).collect();
        let q = vec![all[0].clone(), all[4].clone()];
        let r = match_queries(&q, &all, |qi, d| !(qi == 0 && d == 0), &p).unwrap();
        assert!(r[0][0].is_none());
        assert!(r[1][4].is_some());
        assert_eq!(r[0][2].as_ref().unwrap(), &match_bundles(q[0].as_ref().unwrap(), all[2].as_ref().unwrap(), &p).unwrap());
    }
}
