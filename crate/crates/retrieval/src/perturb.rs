//! The two perturbation protocols: occluding a run of segments and merging
//! two shapes into one outline.

use std::f64::consts::TAU;

use gsmatch_core::breakpoints::detect_breakpoints;
use gsmatch_core::contour::Contour;
use gsmatch_core::geometry::{centroid, Point};
use gsmatch_core::io::contour_from_mask;
use gsmatch_core::mask::BinaryMask;
use gsmatch_core::params::CostParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Entry};
use crate::error::{Error, Result};

/// Occlusion strength range, percent of segments.
pub const OCCLUSION_PERCENT: (f64, f64) = (5.0, 15.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Occlusion {
    /// Starts just after the gap; the closing edge back to the first point is
    /// the chord across it.
    pub contour: Contour<f64>,
    pub segments: usize,
    pub removed: usize,
    /// First removed segment, in the source's break-point order.
    pub first_removed: usize,
    /// Chord endpoints: where the kept outline stops and where it resumes.
    pub chord: (Point<f64>, Point<f64>),
}

impl Occlusion {
    /// Share of the occluded outline's perimeter taken by the chord.
    pub fn chord_fraction(&self) -> f64 {
        self.chord.0.distance(self.chord.1) / self.contour.perimeter()
    }

    /// Indices of a `n`-point resampling of the occluded outline that lie on
    /// the chord, extended by `pad` points on each side. The chord closes the
    /// outline, so it is the tail of the point order.
    pub fn chord_indices(&self, n: usize, pad: usize) -> Vec<usize> {
        let covered = (self.chord_fraction() * n as f64).ceil() as usize;
        let first = n - covered.min(n);
        (0..covered + 1 + 2 * pad)
            .map(|k| (first + n - pad + k) % n)
            .collect()
    }
}

fn nearest_index(c: &Contour<f64>, q: Point<f64>) -> usize {
    c.points()
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance(q).total_cmp(&b.1.distance(q)))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

fn segmentation(c: &Contour<f64>, p: &CostParams<f64>) -> Result<(Contour<f64>, Vec<usize>)> {
    let resampled = c.resample(p.contour_points)?;
    let bps = detect_breakpoints(&resampled, p)?;
    let idx = bps.iter().map(|b| b.index.0).collect();
    Ok((resampled, idx))
}

fn remove_run(c: &Contour<f64>, resampled: &Contour<f64>, bps: &[usize], first: usize, count: usize) -> Result<Occlusion> {
    let n = bps.len();
    if count == 0 || n < count + 3 {
        return Err(Error::TooFewSegmentsLeft(n.saturating_sub(count)));
    }
    let first = first % n;
    let stop = resampled.points()[bps[first]];
    let resume = resampled.points()[bps[(first + count) % n]];
    let len = c.len();
    let from = nearest_index(c, resume);
    let to = nearest_index(c, stop);
    let kept = (to + len - from) % len + 1;
    let points: Vec<Point<f64>> = (0..kept).map(|k| c.points()[(from + k) % len]).collect();
    Ok(Occlusion {
        contour: Contour::new(points)?,
        segments: n,
        removed: count,
        first_removed: first,
        chord: (c.points()[to], c.points()[from]),
    })
}

/// Removes `count` consecutive segments starting with segment `first` (the
/// one opening at break-point `first`) and closes the gap with a chord.
pub fn occlude_run(c: &Contour<f64>, first: usize, count: usize, p: &CostParams<f64>) -> Result<Occlusion> {
    let (resampled, bps) = segmentation(c, p)?;
    remove_run(c, &resampled, &bps, first, count)
}

/// Removes a random run of consecutive segments totalling `percent` of the
/// segment count (rounded, kept within the protocol range when the count
/// allows) and closes the gap with a straight chord. `percent == 0` returns
/// the contour unchanged.
pub fn occlude_percent(c: &Contour<f64>, percent: f64, seed: u64, p: &CostParams<f64>) -> Result<Occlusion> {
    let (resampled, bps) = segmentation(c, p)?;
    let n = bps.len();
    if percent <= 0.0 {
        return Ok(Occlusion {
            contour: c.clone(),
            segments: n,
            removed: 0,
            first_removed: 0,
            chord: (c.points()[0], c.points()[0]),
        });
    }
    let lo = (OCCLUSION_PERCENT.0 / 100.0 * n as f64).ceil() as usize;
    let hi = (OCCLUSION_PERCENT.1 / 100.0 * n as f64).floor() as usize;
    let mut r = ((percent / 100.0) * n as f64).round() as usize;
    if lo <= hi {
        r = r.clamp(lo, hi);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..n);
    remove_run(c, &resampled, &bps, first, r.max(1))
}

/// The protocol: a percentage drawn uniformly from the occlusion range.
pub fn occlude(c: &Contour<f64>, seed: u64, p: &CostParams<f64>) -> Result<Occlusion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0cc1);
    let percent = rng.gen_range(OCCLUSION_PERCENT.0..=OCCLUSION_PERCENT.1);
    occlude_percent(c, percent, seed, p)
}

/// Root-mean-square distance of the points from their centroid.
pub fn rms_radius(c: &Contour<f64>) -> f64 {
    let m = centroid(c.points());
    let s: f64 = c.points().iter().map(|&q| (q - m).norm_sq()).sum();
    (s / c.len() as f64).sqrt()
}

/// Pixels per unit of the first shape when merging; its RMS radius becomes
/// this many pixels.
const MERGE_RADIUS: f64 = 50.0;
const MERGE_RETRIES: usize = 20;

struct Layout {
    a: Vec<Point<f64>>,
    b: Vec<Point<f64>>,
    size: usize,
    centre: Point<f64>,
    scale: f64,
}

/// Centres both shapes, scales `b` to the RMS radius of `a`, and sizes a
/// square canvas that holds them at any offset up to touching distance.
fn layout(a: &Contour<f64>, b: &Contour<f64>) -> Layout {
    let scale = MERGE_RADIUS / rms_radius(a);
    let b_scale = scale * rms_radius(a) / rms_radius(b);
    let ca = centroid(a.points());
    let cb = centroid(b.points());
    let pa: Vec<Point<f64>> = a.points().iter().map(|&q| (q - ca) * scale).collect();
    let pb: Vec<Point<f64>> = b.points().iter().map(|&q| (q - cb) * b_scale).collect();
    let ext = |v: &[Point<f64>]| v.iter().map(|q| q.norm()).fold(0.0, f64::max);
    let reach = ext(&pa) + ext(&pb);
    let size = (2.0 * (reach + ext(&pa)) + 8.0).ceil() as usize;
    let half = (size / 2) as f64;
    Layout {
        a: pa,
        b: pb,
        size,
        centre: Point::new(half, half),
        scale,
    }
}

fn draw(points: &[Point<f64>], shift: Point<f64>, size: usize) -> BinaryMask {
    let moved: Vec<Point<f64>> = points.iter().map(|&q| q + shift).collect();
    let mut m = BinaryMask::new(size, size);
    m.fill_polygon(&moved);
    m
}

fn overlap(a: &BinaryMask, b: &BinaryMask) -> usize {
    let mut n = 0;
    for y in 0..a.height() as isize {
        for x in 0..a.width() as isize {
            if a.get(x, y) && b.get(x, y) {
                n += 1;
            }
        }
    }
    n
}

fn union_outline(a: &BinaryMask, b: &BinaryMask) -> Result<Contour<f64>> {
    let u = a.union(b);
    if u.components().len() != 1 {
        return Err(Error::DegenerateOverlap("union is not a single connected region".into()));
    }
    Ok(contour_from_mask(&u)?)
}

/// Union outline with `b`'s centre placed at `offset` (in units of `a`)
/// from `a`'s centre.
pub fn merge_at(a: &Contour<f64>, b: &Contour<f64>, offset: Point<f64>) -> Result<Contour<f64>> {
    let l = layout(a, b);
    let ma = draw(&l.a, l.centre, l.size);
    let mb = draw(&l.b, l.centre + offset * l.scale, l.size);
    union_outline(&ma, &mb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Merged {
    pub contour: Contour<f64>,
    /// Centre offset of `b` from `a`, in units of `a`.
    pub offset: Point<f64>,
    /// Overlapping pixels over the smaller shape's pixels.
    pub overlap: f64,
}

/// Places `b` in a random direction at the distance where the two shapes
/// overlap by a small random share of the smaller one, and traces the union.
pub fn merge_shapes(a: &Contour<f64>, b: &Contour<f64>, seed: u64) -> Result<Merged> {
    let l = layout(a, b);
    let ma = draw(&l.a, l.centre, l.size);
    let area_a = ma.count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MERGE_RETRIES {
        let theta = rng.gen_range(0.0..TAU);
        let share = rng.gen_range(0.03..0.12);
        let dir = Point::new(theta.cos(), theta.sin());
        let mask_at = |d: f64| draw(&l.b, l.centre + dir * d, l.size);
        let area_b = mask_at(0.0).count();
        let target = share * area_a.min(area_b) as f64;
        // overlap shrinks as b moves away
        let (mut near, mut far) = (0.0, (l.size / 2) as f64);
        for _ in 0..24 {
            let mid = 0.5 * (near + far);
            if overlap(&ma, &mask_at(mid)) as f64 > target {
                near = mid;
            } else {
                far = mid;
            }
        }
        let mb = mask_at(near);
        let shared = overlap(&ma, &mb);
        if shared == 0 {
            continue;
        }
        if let Ok(contour) = union_outline(&ma, &mb) {
            return Ok(Merged {
                contour,
                offset: dir * (near / l.scale),
                overlap: shared as f64 / area_a.min(area_b) as f64,
            });
        }
    }
    Err(Error::DegenerateOverlap(format!("no connected placement after {MERGE_RETRIES} attempts")))
}

/// Where a shape of an occluded dataset lost its segments, in the source
/// shape's segment numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct OcclusionRecord {
    pub id: String,
    pub segments: usize,
    pub first_removed: usize,
    pub removed: usize,
}

impl OcclusionRecord {
    pub fn removed_segments(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.removed).map(|t| (self.first_removed + t) % self.segments)
    }
}

/// Occludes every shape of `ds` (shape `k` with seed `seed + k`), keeping
/// ids. Shapes that cannot be occluded are reported as `(id, reason)`.
pub fn occluded_dataset(ds: &Dataset, seed: u64, p: &CostParams<f64>) -> (Dataset, Vec<OcclusionRecord>, Vec<(String, String)>) {
    let mut entries = Vec::new();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (k, e) in ds.entries.iter().enumerate() {
        match occlude(&e.contour, seed.wrapping_add(k as u64), p) {
            Ok(o) => {
                records.push(OcclusionRecord {
                    id: e.id.clone(),
                    segments: o.segments,
                    first_removed: o.first_removed,
                    removed: o.removed,
                });
                entries.push(Entry {
                    contour: o.contour,
                    ..e.clone()
                });
            }
            Err(err) => failures.push((e.id.clone(), err.to_string())),
        }
    }
    (Dataset::from_entries(entries), records, failures)
}

/// Provenance of one merged shape.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeRecord {
    pub id: String,
    pub first: String,
    pub second: String,
}

/// `count` merged shapes, each from two shapes of different classes. A merged
/// shape is labelled `<classA>+<classB>`.
pub fn merged_dataset(ds: &Dataset, count: usize, seed: u64) -> Result<(Dataset, Vec<MergeRecord>)> {
    let sizes = ds.class_sizes();
    if sizes.len() < 2 {
        return Err(Error::Invalid("merging needs at least two classes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let mut records = Vec::new();
    let mut attempts = 0;
    while entries.len() < count {
        attempts += 1;
        if attempts > count * MERGE_RETRIES {
            return Err(Error::DegenerateOverlap(format!("only {} of {count} merges succeeded", entries.len())));
        }
        let a = &ds.entries[rng.gen_range(0..ds.len())];
        let b = &ds.entries[rng.gen_range(0..ds.len())];
        if a.label == b.label {
            continue;
        }
        let Ok(m) = merge_shapes(&a.contour, &b.contour, rng.gen()) else {
            continue;
        };
        let label = format!("{}+{}", a.label, b.label);
        let id = format!("{label}-{}", entries.len() + 1);
        records.push(MergeRecord {
            id: id.clone(),
            first: a.id.clone(),
            second: b.id.clone(),
        });
        entries.push(Entry {
            id,
            label,
            contour: m.contour,
        });
    }
    Ok((Dataset::from_entries(entries), records))
}
