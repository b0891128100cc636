//! Per-shape preprocessing bundle and the pairwise chamfer table.

use rayon::prelude::*;

use crate::affine::normalize_gs;
use crate::breakpoints::{detect_breakpoints, segment_contour, BreakPoint};
use crate::breakpoints::Segment;
use crate::contour::Contour;
use crate::cost::GsInfo;
use crate::error::{Error, Result};
use crate::fdcm::{
    directional_distance_transform, fdcm_total_units, rasterize, units_to_score, Canvas, DirectionalDt, OrientedEdgeMap,
};
use crate::gs::{enumerate_gs, GsCatalog};
use crate::params::CostParams;
use crate::scalar::Real;

/// Everything matching needs to know about one shape. Distance transforms are
/// the bulk of the memory (`canvas² × n_orient` bytes per GS) and can be
/// dropped and rebuilt.
#[derive(Debug, Clone)]
pub struct ShapeBundle<T> {
    /// Resampled contour.
    pub contour: Contour<T>,
    pub breakpoints: Vec<BreakPoint<T>>,
    pub segments: Vec<Segment<T>>,
    pub catalog: GsCatalog<T>,
    /// Parallel to `catalog.gss`.
    pub infos: Vec<GsInfo<T>>,
    /// Parallel to `catalog.gss`; empty for GSs that could not be normalized.
    pub edges: Vec<OrientedEdgeMap>,
    pub canvas: Canvas,
    transforms: Option<Vec<Option<DirectionalDt>>>,
}

impl<T: Real> ShapeBundle<T> {
    /// Resamples `raw`, detects break-points and prepares every GS.
    pub fn build(raw: &Contour<T>, p: &CostParams<T>) -> Result<Self> {
        let contour = raw.resample(p.contour_points)?;
        let bps = detect_breakpoints(&contour, p)?;
        Self::from_breakpoints(contour, bps, p)
    }

    /// Prepares a contour that is already resampled, with given break-points.
    pub fn from_breakpoints(contour: Contour<T>, breakpoints: Vec<BreakPoint<T>>, p: &CostParams<T>) -> Result<Self> {
        let segments = segment_contour(&contour, &breakpoints)?;
        let catalog = enumerate_gs(&contour, &segments, p)?;
        let infos = catalog.gss.iter().map(GsInfo::from).collect();
        let canvas = Canvas::from_params(p);
        let edges = catalog
            .gss
            .par_iter()
            .map(|g| match normalize_gs(g, p.canonical_length) {
                Ok(ngs) => rasterize(&ngs, p),
                Err(_) => OrientedEdgeMap {
                    canvas,
                    pixels: Vec::new(),
                },
            })
            .collect();
        Ok(Self {
            contour,
            breakpoints,
            segments,
            catalog,
            infos,
            edges,
            canvas,
            transforms: None,
        })
    }

    /// Same shape with the break-point list rotated so that break-point `k`
    /// comes first (and the contour starts there).
    pub fn rotated(&self, k: usize, p: &CostParams<T>) -> Result<Self> {
        let n = self.breakpoints.len();
        let shift = self.breakpoints[k % n].index.0;
        let len = self.contour.len();
        let bps = (0..n)
            .map(|j| {
                let mut b = self.breakpoints[(k + j) % n];
                b.index.0 = (b.index.0 + len - shift) % len;
                b
            })
            .collect();
        let mut out = Self::from_breakpoints(self.contour.rotated(shift), bps, p)?;
        if self.has_transforms() {
            out.compute_transforms(p);
        }
        Ok(out)
    }

    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn n_gs(&self) -> usize {
        self.infos.len()
    }

    pub fn seg_weights(&self) -> Vec<T> {
        self.segments.iter().map(|s| s.weight).collect()
    }

    pub fn has_transforms(&self) -> bool {
        self.transforms.is_some()
    }

    /// Builds the directional distance transform of every GS.
    pub fn compute_transforms(&mut self, p: &CostParams<T>) {
        if self.transforms.is_none() {
            self.transforms = Some(build_transforms(&self.edges, p));
        }
    }

    pub fn drop_transforms(&mut self) {
        self.transforms = None;
    }

    pub fn transforms(&self) -> Option<&[Option<DirectionalDt>]> {
        self.transforms.as_deref()
    }

    /// Bytes held by the distance transforms of this shape once built.
    pub fn transform_bytes(&self) -> usize {
        let c = self.canvas;
        self.edges.iter().filter(|e| !e.is_empty()).count() * c.width * c.height * c.n_orient
    }
}

/// Transforms for a list of edge maps; `None` where the map is empty.
pub fn build_transforms<T: Real>(edges: &[OrientedEdgeMap], p: &CostParams<T>) -> Vec<Option<DirectionalDt>> {
    edges
        .par_iter()
        .map(|e| directional_distance_transform(e, p.lambda, p.tau_clamp).ok())
        .collect()
}

/// Directed chamfer totals of every query edge map against every target
/// transform, row-major `queries × targets`, kept as exact integers so a
/// table can be held cheaply while the transforms are discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedTable {
    pub rows: usize,
    pub cols: usize,
    /// Chamfer units; `UNDEFINED` where the query is empty or the target has
    /// no transform.
    totals: Vec<u32>,
    /// Pixel count of each query.
    counts: Vec<usize>,
}

impl DirectedTable {
    const UNDEFINED: u32 = u32::MAX;

    pub fn compute(queries: &[OrientedEdgeMap], targets: &[Option<DirectionalDt>]) -> Result<Self> {
        let rows: Vec<Result<Vec<u32>>> = queries
            .par_iter()
            .map(|q| {
                targets
                    .iter()
                    .map(|t| match t {
                        Some(dt) if !q.is_empty() => fdcm_total_units(q, dt).map(|v| v as u32),
                        Some(dt) => q.canvas.check(&dt.canvas).map(|_| Self::UNDEFINED),
                        None => Ok(Self::UNDEFINED),
                    })
                    .collect()
            })
            .collect();
        let mut totals = Vec::with_capacity(queries.len() * targets.len());
        for r in rows {
            totals.extend(r?);
        }
        Ok(Self {
            rows: queries.len(),
            cols: targets.len(),
            totals,
            counts: queries.iter().map(|q| q.len()).collect(),
        })
    }

    /// Mean distance in pixels; the clamp where undefined.
    pub fn score<T: Real>(&self, i: usize, j: usize, p: &CostParams<T>) -> T {
        match self.totals[i * self.cols + j] {
            Self::UNDEFINED => p.tau_clamp,
            t => units_to_score(t as u64, self.counts[i]),
        }
    }

    /// Approximate heap size.
    pub fn bytes(&self) -> usize {
        self.totals.len() * 4 + self.counts.len() * 8
    }
}

/// `C_dc` for every GS pair of two shapes, row-major `a × b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdcTable<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Real> CdcTable<T> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    /// Averages the `a → b` table (`a × b`) with the `b → a` table (`b × a`).
    pub fn from_directed(ab: &DirectedTable, ba: &DirectedTable, p: &CostParams<T>) -> Result<Self> {
        if ab.rows != ba.cols || ab.cols != ba.rows {
            return Err(Error::CanvasMismatch("directed tables of mismatched shape".into()));
        }
        let half = T::lit(0.5);
        Ok(Self::from_fn(ab.rows, ab.cols, |i, j| (ab.score(i, j, p) + ba.score(j, i, p)) * half))
    }

    /// Symmetric chamfer score of every GS pair. Transforms that are not
    /// cached on a bundle are built for the duration of the call.
    pub fn compute(a: &ShapeBundle<T>, b: &ShapeBundle<T>, p: &CostParams<T>) -> Result<Self> {
        if a.canvas != b.canvas {
            return Err(Error::CanvasMismatch(format!("{:?} vs {:?}", a.canvas, b.canvas)));
        }
        let owned_a;
        let ta = match a.transforms() {
            Some(t) => t,
            None => {
                owned_a = build_transforms(&a.edges, p);
                &owned_a[..]
            }
        };
        let owned_b;
        let tb = match b.transforms() {
            Some(t) => t,
            None => {
                owned_b = build_transforms(&b.edges, p);
                &owned_b[..]
            }
        };
        let ab = DirectedTable::compute(&a.edges, tb)?;
        let ba = DirectedTable::compute(&b.edges, ta)?;
        Self::from_directed(&ab, &ba, p)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn transposed(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn blob(n: usize) -> Contour<f64> {
        let pts = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                let r = 60.0 + 18.0 * (3.0 * t).cos() + 7.0 * (5.0 * t + 0.4).sin();
                Point::new(r * t.cos(), 0.7 * r * t.sin())
            })
            .collect();
        Contour::new(pts).unwrap()
    }

    #[test]
    fn bundle_is_consistent() {
        let p = CostParams::default();
        let s = ShapeBundle::build(&blob(400), &p).unwrap();
        assert_eq!(s.contour.len(), 200);
        assert_eq!(s.n_segments(), s.breakpoints.len());
        assert_eq!(s.edges.len(), s.n_gs());
        let total: usize = s.segments.iter().map(|g| g.point_count).sum();
        assert_eq!(total, 200);
        assert!(s.edges.iter().all(|e| !e.is_empty()));
    }

    #[test]
    fn self_table_has_zero_diagonal_and_is_symmetric() {
        let p = CostParams::default();
        let mut s = ShapeBundle::build(&blob(300), &p).unwrap();
        s.compute_transforms(&p);
        let t = CdcTable::compute(&s, &s, &p).unwrap();
        for i in 0..t.rows {
            assert_eq!(t.get(i, i), 0.0);
            for j in 0..t.cols {
                assert_eq!(t.get(i, j), t.get(j, i));
                assert!(t.get(i, j) >= 0.0 && t.get(i, j) <= p.tau_clamp);
            }
        }
    }

    #[test]
    fn cached_and_transient_transforms_agree() {
        let p = CostParams::default();
        let a = ShapeBundle::build(&blob(300), &p).unwrap();
        let b = ShapeBundle::build(&blob(300).map_points(|q| Point::new(q.x * 1.3 + 0.2 * q.y, q.y)).unwrap(), &p).unwrap();
        let cold = CdcTable::compute(&a, &b, &p).unwrap();
        let (mut a2, mut b2) = (a.clone(), b.clone());
        a2.compute_transforms(&p);
        b2.compute_transforms(&p);
        let warm = CdcTable::compute(&a2, &b2, &p).unwrap();
        assert_eq!(cold, warm);
        assert_eq!(CdcTable::compute(&b2, &a2, &p).unwrap(), warm.transposed());
    }

    #[test]
    fn rotation_relabels_breakpoints() {
        let p = CostParams::default();
        let s = ShapeBundle::build(&blob(300), &p).unwrap();
        let r = s.rotated(2, &p).unwrap();
        assert_eq!(r.n_segments(), s.n_segments());
        assert_eq!(r.n_gs(), s.n_gs());
        assert_eq!(r.breakpoints[0].index.0, 0);
        for (k, seg) in r.segments.iter().enumerate() {
            assert_eq!(seg.point_count, s.segments[(k + 2) % s.n_segments()].point_count);
        }
    }
}
