//! Ranking-based retrieval scores.

use std::collections::HashMap;

use crate::matrix::DistanceMatrix;

/// Candidate indices ordered by distance, ties by index.
fn ranked(dist: &[(usize, f64)]) -> Vec<usize> {
    let mut v = dist.to_vec();
    v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    v.into_iter().map(|(j, _)| j).collect()
}

/// Bullseye score in percent. Each query is retrieved first, followed by
/// the other shapes by increasing distance; the same-class shapes among the
/// first `top` are counted and divided by the class size. Rows marked invalid
/// are neither queried nor retrieved.
pub fn bullseye_score(dm: &DistanceMatrix, labels: &[String], top: usize) -> f64 {
    let valid = dm.valid();
    let mut sizes: HashMap<&str, usize> = HashMap::new();
    for (k, l) in labels.iter().enumerate() {
        if valid[k] {
            *sizes.entry(l.as_str()).or_insert(0) += 1;
        }
    }
    let (mut hits, mut possible) = (0usize, 0usize);
    for i in (0..dm.len()).filter(|&i| valid[i]) {
        let others: Vec<(usize, f64)> = (0..dm.len())
            .filter(|&j| j != i && valid[j])
            .map(|j| (j, dm.get(i, j)))
            .collect();
        let mut order = vec![i];
        order.extend(ranked(&others));
        hits += order.iter().take(top).filter(|&&j| labels[j] == labels[i]).count();
        possible += sizes[labels[i].as_str()];
    }
    if possible == 0 {
        return 0.0;
    }
    100.0 * hits as f64 / possible as f64
}

/// One query against a candidate list.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    /// `(candidate index, distance)`; excluded candidates are simply absent.
    pub distances: Vec<(usize, f64)>,
    /// Labels counted as correct (two for a merged query).
    pub accepted: Vec<String>,
}

/// Percentage of queries whose `k` nearest candidates include an accepted
/// label.
pub fn topk_queries(queries: &[Query], candidate_labels: &[String], k: usize) -> f64 {
    if queries.is_empty() {
        return 0.0;
    }
    let hits = queries
        .iter()
        .filter(|q| {
            ranked(&q.distances)
                .iter()
                .take(k)
                .any(|&j| q.accepted.contains(&candidate_labels[j]))
        })
        .count();
    100.0 * hits as f64 / queries.len() as f64
}

/// Leave-one-out top-`k` recognition over a square matrix.
pub fn topk_recognition(dm: &DistanceMatrix, labels: &[String], k: usize) -> f64 {
    let valid = dm.valid();
    let queries: Vec<Query> = (0..dm.len())
        .filter(|&i| valid[i])
        .map(|i| Query {
            distances: (0..dm.len())
                .filter(|&j| j != i && valid[j])
                .map(|j| (j, dm.get(i, j)))
                .collect(),
            accepted: vec![labels[i].clone()],
        })
        .collect();
    topk_queries(&queries, labels, k)
}
