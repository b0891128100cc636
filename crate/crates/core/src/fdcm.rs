//! Oriented edge rasters, directional distance transforms and the
//! symmetrized directional chamfer score.
//!
//! Distances are kept in integer thirds of a pixel (the 3-4 chamfer unit) and
//! stored as bytes saturated at the clamp, which keeps one transform at
//! `W * H * n_orient` bytes.

use std::io::{Read, Write};

use crate::affine::NormalizedGs;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::params::CostParams;
use crate::scalar::Real;

/// Chamfer units per pixel.
pub const UNITS: u32 = 3;
const ORTHO: u32 = 3;
const DIAG: u32 = 4;

/// Raster geometry shared by every edge map and transform of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Canvas {
    pub width: usize,
    pub height: usize,
    pub n_orient: usize,
}

impl Canvas {
    pub fn from_params<T: Real>(p: &CostParams<T>) -> Self {
        Self {
            width: p.canvas_size,
            height: p.canvas_size,
            n_orient: p.n_orient,
        }
    }

    /// Maps canonical-frame points to pixel coordinates: open runs span
    /// `margin..margin + length` on the middle row, closed runs are centred.
    pub fn place<T: Real>(&self, points: &[Point<T>], is_closed: bool, length: T) -> Vec<Point<T>> {
        let w = T::from_count(self.width);
        let h = T::from_count(self.height);
        let half = T::lit(0.5);
        let dx = if is_closed { w * half } else { (w - length) * half };
        let off = Point::new(dx, h * half);
        points.iter().map(|&p| p + off).collect()
    }

    pub(crate) fn check(&self, other: &Canvas) -> Result<()> {
        if self != other {
            return Err(Error::CanvasMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePixel {
    pub x: u16,
    pub y: u16,
    pub channel: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrientedEdgeMap {
    pub canvas: Canvas,
    /// One entry per unit arc-length sample, sorted. A pixel crossed twice
    /// appears twice, so averages over the list are averages along the curve.
    pub pixels: Vec<EdgePixel>,
}

impl OrientedEdgeMap {
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Pixel count per orientation channel.
    pub fn channel_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.canvas.n_orient];
        for p in &self.pixels {
            h[p.channel as usize] += 1;
        }
        h
    }
}

/// Channel whose bin, centred on `k * pi / n`, contains the undirected
/// orientation of `d`.
pub fn orientation_channel<T: Real>(d: Point<T>, n_orient: usize) -> u8 {
    let mut th = d.y.atan2(d.x);
    if th < T::zero() {
        th += T::PI();
    }
    let n = T::from_count(n_orient);
    let k = (th / T::PI() * n + T::lit(0.5)).floor();
    (k.to_usize().unwrap_or(0) % n_orient) as u8
}

/// Draws a polyline (already in pixel coordinates) by marking the pixel
/// under every point at unit arc-length spacing, so pixel counts follow arc
/// length at any orientation. Each piece `i -> i+1` takes its orientation
/// from the wider chord `p[i-1] -> p[i+2]`, which suppresses pixel-scale
/// jitter. Pixels off the canvas are dropped.
pub fn rasterize_polyline<T: Real>(pts: &[Point<T>], is_closed: bool, canvas: Canvas) -> OrientedEdgeMap {
    let n = pts.len();
    let mut pixels = Vec::new();
    let pieces = if is_closed { n } else { n.saturating_sub(1) };
    let at = |i: isize| -> Point<T> {
        if is_closed {
            pts[i.rem_euclid(n as isize) as usize]
        } else {
            pts[i.clamp(0, n as isize - 1) as usize]
        }
    };
    let mut mark = |p: Point<T>, ch: u8| {
        let (x, y) = (p.x.floor(), p.y.floor());
        if x >= T::zero()
            && y >= T::zero()
            && x < T::from_count(canvas.width)
            && y < T::from_count(canvas.height)
        {
            pixels.push(EdgePixel {
                x: x.to_u16().unwrap_or(0),
                y: y.to_u16().unwrap_or(0),
                channel: ch,
            });
        }
    };
    // arc position of the next sample, measured from the current piece start
    let mut next = T::zero();
    let mut last_ch = 0u8;
    let mut tail = T::zero();
    for i in 0..pieces as isize {
        let a = at(i);
        let b = at(i + 1);
        let len = a.distance(b);
        let mut dir = at(i + 2) - at(i - 1);
        if dir.norm_sq() <= T::zero() {
            dir = b - a;
        }
        if len <= T::zero() || dir.norm_sq() <= T::zero() {
            continue;
        }
        let ch = orientation_channel(dir, canvas.n_orient);
        last_ch = ch;
        // a degenerate normalization can blow a run far off the canvas
        if len > T::lit(1e6) {
            return OrientedEdgeMap { canvas, pixels: vec![] };
        }
        while next <= len {
            mark(a.lerp(b, next / len), ch);
            next += T::one();
        }
        next -= len;
        tail = T::one() - next;
    }
    if !is_closed && n > 0 && tail > T::lit(0.5) {
        mark(pts[n - 1], last_ch);
    }
    pixels.sort_unstable();
    OrientedEdgeMap { canvas, pixels }
}

/// Rasterizes a normalized GS on the canvas described by `p`.
pub fn rasterize<T: Real>(ngs: &NormalizedGs<T>, p: &CostParams<T>) -> OrientedEdgeMap {
    let canvas = Canvas::from_params(p);
    let placed = canvas.place(&ngs.points, ngs.is_closed, p.canonical_length);
    rasterize_polyline(&placed, ngs.is_closed, canvas)
}

/// Distance to the nearest edge pixel in `(x, y, orientation)` space, where a
/// step between neighbouring orientation channels costs `lambda`.
#[derive(Clone, PartialEq)]
pub struct DirectionalDt {
    pub canvas: Canvas,
    /// Orientation step, chamfer units.
    pub lambda_units: u8,
    /// Saturation, chamfer units.
    pub clamp_units: u8,
    /// `[channel][y][x]`.
    data: Vec<u8>,
}

impl std::fmt::Debug for DirectionalDt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectionalDt")
            .field("canvas", &self.canvas)
            .field("lambda_units", &self.lambda_units)
            .field("clamp_units", &self.clamp_units)
            .finish_non_exhaustive()
    }
}

fn to_units<T: Real>(v: T) -> u32 {
    (v * T::from_count(UNITS as usize)).round().to_u32().unwrap_or(u32::MAX)
}

impl DirectionalDt {
    #[inline]
    fn idx(&self, x: usize, y: usize, ch: usize) -> usize {
        (ch * self.canvas.height + y) * self.canvas.width + x
    }

    /// Raw value in chamfer units.
    #[inline]
    pub fn units(&self, x: usize, y: usize, ch: usize) -> u8 {
        self.data[self.idx(x, y, ch)]
    }

    /// Value in pixels.
    pub fn get<T: Real>(&self, x: usize, y: usize, ch: usize) -> T {
        T::from_count(self.units(x, y, ch) as usize) / T::from_count(UNITS as usize)
    }

    pub fn clamp<T: Real>(&self) -> T {
        T::from_count(self.clamp_units as usize) / T::from_count(UNITS as usize)
    }

    pub fn byte_len(&self) -> usize {
        self.data.len()
    }

    /// Flat dump: an ASCII header line `GSDDT W H n_orient lambda clamp`
    /// followed by the raw bytes.
    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "GSDDT {} {} {} {} {}",
            self.canvas.width, self.canvas.height, self.canvas.n_orient, self.lambda_units, self.clamp_units
        )?;
        w.write_all(&self.data)
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::Parse(format!("distance transform: {e}")))?;
        let nl = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Parse("distance transform: missing header".into()))?;
        let header = std::str::from_utf8(&bytes[..nl])
            .map_err(|_| Error::Parse("distance transform: bad header".into()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let num = |i: usize| -> Result<usize> {
            f.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse("distance transform: bad header".into()))
        };
        if f.first() != Some(&"GSDDT") || f.len() != 6 {
            return Err(Error::Parse("distance transform: bad header".into()));
        }
        let canvas = Canvas {
            width: num(1)?,
            height: num(2)?,
            n_orient: num(3)?,
        };
        let (lambda_units, clamp_units) = (num(4)?, num(5)?);
        let data = bytes[nl + 1..].to_vec();
        if data.len() != canvas.width * canvas.height * canvas.n_orient
            || lambda_units > 255
            || clamp_units > 255
        {
            return Err(Error::Parse("distance transform: size mismatch".into()));
        }
        Ok(Self {
            canvas,
            lambda_units: lambda_units as u8,
            clamp_units: clamp_units as u8,
            data,
        })
    }
}

/// Per-channel 3-4 chamfer transform, then cyclic sweeps across channels
/// with step cost `lambda`, saturated at `tau`.
///
/// Everything runs in saturating byte arithmetic: a value that saturates at
/// 255 is at least the clamp, so clamping at the end gives the exact result.
pub fn directional_distance_transform<T: Real>(em: &OrientedEdgeMap, lambda: T, tau: T) -> Result<DirectionalDt> {
    if em.is_empty() {
        return Err(Error::EmptyEdgeMap);
    }
    let Canvas {
        width: w,
        height: h,
        n_orient: n,
    } = em.canvas;
    let lambda_u = to_units(lambda).min(255) as u8;
    let clamp_u = to_units(tau).min(255) as u8;
    let plane = w * h;
    let mut d = vec![u8::MAX; plane * n];
    let mut used = vec![false; n];
    for p in &em.pixels {
        d[p.channel as usize * plane + p.y as usize * w + p.x as usize] = 0;
        used[p.channel as usize] = true;
    }
    for ch in (0..n).filter(|&c| used[c]) {
        chamfer_2d(&mut d[ch * plane..(ch + 1) * plane], w, h);
    }
    // two passes each way settle every cyclic chain of orientation steps;
    // done in cache-sized blocks of cells
    if n > 1 {
        const BLOCK: usize = 512;
        let mut lo = 0;
        while lo < plane {
            let hi = (lo + BLOCK).min(plane);
            let relax = |d: &mut [u8], from: usize, to: usize| {
                for c in lo..hi {
                    let s = d[from * plane + c].saturating_add(lambda_u);
                    let t = &mut d[to * plane + c];
                    *t = (*t).min(s);
                }
            };
            for _ in 0..2 {
                for ch in 0..n {
                    relax(&mut d, (ch + n - 1) % n, ch);
                }
            }
            for _ in 0..2 {
                for ch in (0..n).rev() {
                    relax(&mut d, (ch + 1) % n, ch);
                }
            }
            lo = hi;
        }
    }
    for v in &mut d {
        *v = (*v).min(clamp_u);
    }
    Ok(DirectionalDt {
        canvas: em.canvas,
        lambda_units: lambda_u,
        clamp_units: clamp_u,
        data: d,
    })
}

/// Two-pass 3-4 chamfer. Each pass first takes the previous row's
/// contributions for a whole row, then runs along the row.
fn chamfer_2d(d: &mut [u8], w: usize, h: usize) {
    const O: u8 = ORTHO as u8;
    const D: u8 = DIAG as u8;
    for x in 1..w {
        d[x] = d[x].min(d[x - 1].saturating_add(O));
    }
    for y in 1..h {
        let (done, rest) = d.split_at_mut(y * w);
        let prev = &done[(y - 1) * w..];
        let row = &mut rest[..w];
        vertical(row, prev, w);
        for x in 1..w {
            row[x] = row[x].min(row[x - 1].saturating_add(O));
        }
    }
    let last = (h - 1) * w;
    for x in (0..w - 1).rev() {
        d[last + x] = d[last + x].min(d[last + x + 1].saturating_add(O));
    }
    for y in (0..h - 1).rev() {
        let (head, tail) = d.split_at_mut((y + 1) * w);
        let next = &tail[..w];
        let row = &mut head[y * w..];
        vertical(row, next, w);
        for x in (0..w - 1).rev() {
            row[x] = row[x].min(row[x + 1].saturating_add(O));
        }
    }

    fn vertical(row: &mut [u8], other: &[u8], w: usize) {
        row[0] = row[0].min(other[0].saturating_add(O));
        if w > 1 {
            row[0] = row[0].min(other[1].saturating_add(D));
            row[w - 1] = row[w - 1]
                .min(other[w - 1].saturating_add(O))
                .min(other[w - 2].saturating_add(D));
        }
        for x in 1..w.saturating_sub(1) {
            let v = other[x]
                .saturating_add(O)
                .min(other[x - 1].saturating_add(D))
                .min(other[x + 1].saturating_add(D));
            row[x] = row[x].min(v);
        }
    }
}

/// Sum of transform values, in chamfer units, over the query's edge pixels.
pub fn fdcm_total_units(q: &OrientedEdgeMap, dt: &DirectionalDt) -> Result<u64> {
    q.canvas.check(&dt.canvas)?;
    Ok(q.pixels
        .iter()
        .map(|p| dt.units(p.x as usize, p.y as usize, p.channel as usize) as u64)
        .sum())
}

/// Mean clamped transform value over the query's edge pixels. An empty query
/// scores the clamp.
pub fn fdcm_score<T: Real>(q: &OrientedEdgeMap, dt: &DirectionalDt) -> Result<T> {
    let total = fdcm_total_units(q, dt)?;
    if q.is_empty() {
        return Ok(dt.clamp());
    }
    Ok(units_to_score(total, q.len()))
}

/// Mean distance in pixels from a unit total over `count` pixels.
pub fn units_to_score<T: Real>(total: u64, count: usize) -> T {
    T::from_count(total as usize) / T::from_count(count * UNITS as usize)
}

/// Average of the two directed scores.
pub fn symmetric_fdcm<T: Real>(
    a: &OrientedEdgeMap,
    a_dt: &DirectionalDt,
    b: &OrientedEdgeMap,
    b_dt: &DirectionalDt,
) -> Result<T> {
    let ab: T = fdcm_score(a, b_dt)?;
    let ba: T = fdcm_score(b, a_dt)?;
    Ok((ab + ba) * T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canvas() -> Canvas {
        Canvas {
            width: 64,
            height: 64,
            n_orient: 20,
        }
    }

    fn line(a: (f64, f64), b: (f64, f64), steps: usize) -> Vec<Point<f64>> {
        (0..=steps)
            .map(|k| {
                let t = k as f64 / steps as f64;
                Point::new(a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
            })
            .collect()
    }

    #[test]
    fn channels_follow_orientation() {
        let h = rasterize_polyline(&line((5.5, 30.5), (55.5, 30.5), 10), false, canvas());
        assert!(h.pixels.iter().all(|p| p.channel == 0));
        assert_eq!(h.len(), 51);
        let d = rasterize_polyline(&line((5.5, 5.5), (45.5, 45.5), 8), false, canvas());
        // pi/4 is the centre of bin 5 of 20
        assert!(d.pixels.iter().all(|p| p.channel == 5));
        // direction sign does not matter
        assert_eq!(orientation_channel(Point::new(-1.0, 0.0), 20), 0);
        assert_eq!(orientation_channel(Point::new(0.0, -1.0), 20), 10);
        assert_eq!(orientation_channel(Point::new(1.0, -1e-9), 20), 0);
    }

    #[test]
    fn circle_channels_roughly_uniform() {
        let c = Canvas {
            width: 128,
            height: 128,
            n_orient: 20,
        };
        // phase keeps piece orientations off the bin boundaries
        let pts: Vec<Point<f64>> = (0..200)
            .map(|k| {
                let t = 0.37 + std::f64::consts::TAU * k as f64 / 200.0;
                Point::new(64.0 + 50.0 * t.cos(), 64.0 + 50.0 * t.sin())
            })
            .collect();
        let em = rasterize_polyline(&pts, true, c);
        let hist = em.channel_histogram();
        let mean = hist.iter().sum::<usize>() as f64 / 20.0;
        for v in hist {
            assert!((v as f64 - mean).abs() <= 0.2 * mean, "{v} vs {mean}");
        }
    }

    fn brute(em: &OrientedEdgeMap, x: usize, y: usize, ch: usize, lambda: f64) -> f64 {
        let n = em.canvas.n_orient;
        em.pixels
            .iter()
            .map(|p| {
                let dx = p.x as f64 - x as f64;
                let dy = p.y as f64 - y as f64;
                let k = (p.channel as usize + n - ch) % n;
                dx.hypot(dy) + lambda * k.min(n - k) as f64
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn transform_basics() {
        let em = rasterize_polyline(&line((10.5, 20.5), (50.5, 20.5), 4), false, canvas());
        let dt = directional_distance_transform(&em, 4.0, 40.0).unwrap();
        assert_eq!(dt.units(30, 20, 0), 0);
        // five rows away, same channel
        let v: f64 = dt.get(30, 25, 0);
        assert!((v - 5.0).abs() <= 0.08 * 5.0);
        assert!((v - brute(&em, 30, 25, 0, 4.0)).abs() < 1e-9);
        // orientation offsets add exactly lambda per step
        for k in 1..=3 {
            let shifted: f64 = dt.get(30, 25, k);
            assert!((shifted - (v + 4.0 * k as f64)).abs() < 1e-9);
            let wrapped: f64 = dt.get(30, 25, 20 - k);
            assert!((wrapped - (v + 4.0 * k as f64)).abs() < 1e-9);
        }
        // saturation
        assert_eq!(dt.units(30, 25, 10), 120);
    }

    #[test]
    fn transform_matches_brute_force_within_chamfer_error() {
        use rand::{Rng, SeedableRng};
        let pts: Vec<Point<f64>> = (0..60)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 60.0;
                Point::new(32.0 + 20.0 * t.cos() + 3.0 * (3.0 * t).sin(), 32.0 + 14.0 * t.sin())
            })
            .collect();
        let em = rasterize_polyline(&pts, true, canvas());
        let dt = directional_distance_transform(&em, 4.0, 40.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (x, y, ch) = (rng.gen_range(0..64), rng.gen_range(0..64), rng.gen_range(0..20));
            let b = brute(&em, x, y, ch, 4.0).min(40.0);
            let v: f64 = dt.get(x, y, ch);
            assert!((v - b).abs() <= 0.08 * b + 0.5, "({x},{y},{ch}) {v} vs {b}");
        }
        // relaxation: no cell exceeds a neighbour plus the step cost
        for ch in 0..20 {
            for y in 0..64 {
                for x in 1..64 {
                    assert!(dt.units(x, y, ch) as u32 <= dt.units(x - 1, y, ch) as u32 + ORTHO);
                }
                let next = (ch + 1) % 20;
                assert!(dt.units(7, y, ch) as u32 <= dt.units(7, y, next) as u32 + 12);
            }
        }
    }

    #[test]
    fn scores() {
        let a = rasterize_polyline(&line((10.5, 20.5), (50.5, 20.5), 4), false, canvas());
        let b = rasterize_polyline(&line((10.5, 23.5), (50.5, 23.5), 4), false, canvas());
        let far = rasterize_polyline(&line((10.5, 20.5), (50.5, 20.5), 4), false, canvas());
        let da = directional_distance_transform(&a, 4.0, 40.0).unwrap();
        let db = directional_distance_transform(&b, 4.0, 40.0).unwrap();
        assert_eq!(fdcm_score::<f64>(&a, &da).unwrap(), 0.0);
        assert_eq!(symmetric_fdcm::<f64>(&a, &da, &far, &da).unwrap(), 0.0);
        let s: f64 = symmetric_fdcm(&a, &da, &b, &db).unwrap();
        assert!((s - 3.0).abs() < 1e-9);
        let s2: f64 = symmetric_fdcm(&b, &db, &a, &da).unwrap();
        assert_eq!(s, s2);
        // perpendicular far away saturates
        let v = rasterize_polyline(&line((60.5, 0.5), (60.5, 63.5), 4), false, canvas());
        let tiny = rasterize_polyline(&line((0.5, 0.5), (1.5, 0.5), 1), false, canvas());
        let dt = directional_distance_transform(&tiny, 4.0, 10.0).unwrap();
        assert_eq!(fdcm_score::<f64>(&v, &dt).unwrap(), 10.0);
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        let empty = OrientedEdgeMap {
            canvas: canvas(),
            pixels: vec![],
        };
        assert!(matches!(
            directional_distance_transform(&empty, 4.0, 40.0),
            Err(Error::EmptyEdgeMap)
        ));
        let a = rasterize_polyline(&line((10.5, 20.5), (50.5, 20.5), 4), false, canvas());
        let da = directional_distance_transform(&a, 4.0, 40.0).unwrap();
        assert_eq!(fdcm_score::<f64>(&empty, &da).unwrap(), 40.0);
        let mut other = a.clone();
        other.canvas.width = 32;
        assert!(matches!(fdcm_score::<f64>(&other, &da), Err(Error::CanvasMismatch(_))));
    }

    #[test]
    fn dump_round_trip() {
        let a = rasterize_polyline(&line((10.5, 20.5), (50.5, 40.5), 4), false, canvas());
        let da = directional_distance_transform(&a, 4.0, 40.0).unwrap();
        let mut buf = Vec::new();
        da.write_to(&mut buf).unwrap();
        let back = DirectionalDt::read_from(&mut buf.as_slice()).unwrap();
        assert!(back == da);
        assert!(DirectionalDt::read_from(&mut &buf[..buf.len() - 1]).is_err());
        assert!(DirectionalDt::read_from(&mut &b"junk"[..]).is_err());
    }

    /// Shortest paths over the (x, y, channel) grid: 3 per axis step, 4 per
    /// diagonal step, lambda per cyclic channel step.
    fn dijkstra_units(em: &OrientedEdgeMap, lambda_u: u32, clamp_u: u32) -> Vec<u32> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let Canvas { width: w, height: h, n_orient: n } = em.canvas;
        let idx = |x: usize, y: usize, c: usize| (c * h + y) * w + x;
        let mut dist = vec![u32::MAX; w * h * n];
        let mut heap = BinaryHeap::new();
        for p in &em.pixels {
            let k = idx(p.x as usize, p.y as usize, p.channel as usize);
            dist[k] = 0;
            heap.push(Reverse((0u32, p.x as usize, p.y as usize, p.channel as usize)));
        }
        while let Some(Reverse((d, x, y, c))) = heap.pop() {
            if d > dist[idx(x, y, c)] {
                continue;
            }
            let mut push = |nx: isize, ny: isize, nc: usize, cost: u32| {
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    return;
                }
                let k = idx(nx as usize, ny as usize, nc);
                if d + cost < dist[k] {
                    dist[k] = d + cost;
                    heap.push(Reverse((d + cost, nx as usize, ny as usize, nc)));
                }
            };
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx != 0 || dy != 0 {
                        let cost = if dx != 0 && dy != 0 { 4 } else { 3 };
                        push(x as isize + dx, y as isize + dy, c, cost);
                    }
                }
            }
            push(x as isize, y as isize, (c + 1) % n, lambda_u);
            push(x as isize, y as isize, (c + n - 1) % n, lambda_u);
        }
        dist.into_iter().map(|d| d.min(clamp_u)).collect()
    }

    #[test]
    fn dt_equals_graph_shortest_paths() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..6 {
            let canvas = Canvas { width: 31, height: 23, n_orient: 8 };
            let count = [1, 2, 5, 12, 30, 60][trial];
            let mut pixels: Vec<EdgePixel> = (0..count)
                .map(|_| EdgePixel {
                    x: rng.gen_range(0..31),
                    y: rng.gen_range(0..23),
                    channel: rng.gen_range(0..8),
                })
                .collect();
            pixels.sort_unstable();
            let em = OrientedEdgeMap { canvas, pixels };
            let dt = directional_distance_transform(&em, 4.0f64, 40.0).unwrap();
            let oracle = dijkstra_units(&em, 12, 120);
            for c in 0..8 {
                for y in 0..23 {
                    for x in 0..31 {
                        let k = (c * 23 + y) * 31 + x;
                        assert_eq!(dt.units(x, y, c) as u32, oracle[k], "trial {trial} at ({x},{y},{c})");
                    }
                }
            }
        }
    }
}
