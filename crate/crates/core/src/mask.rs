//! Binary masks: graymap decoding, connected components, polygon filling
//! and Moore-neighbour boundary tracing.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                m.data[y * width + x] = f(x, y);
            }
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.data[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!((self.width, self.height), (other.width, other.height));
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// Decodes a plain (`P2`) or raw (`P5`) graymap. Pixels at or above half
    /// of `maxval` are foreground.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let magic = next_token(bytes, &mut pos).ok_or_else(|| bad("missing magic"))?;
        let raw = match magic.as_slice() {
            b"P2" => false,
            b"P5" => true,
            _ => return Err(bad("not a P2/P5 graymap")),
        };
        let mut header = [0usize; 3];
        for h in header.iter_mut() {
            let tok = next_token(bytes, &mut pos).ok_or_else(|| bad("truncated header"))?;
            *h = std::str::from_utf8(&tok)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("non-numeric header field"))?;
        }
        let [width, height, maxval] = header;
        if width == 0 || height == 0 || maxval == 0 || maxval > 65535 {
            return Err(bad("invalid graymap dimensions"));
        }
        let n = width * height;
        let mut values = Vec::with_capacity(n);
        if raw {
            // exactly one whitespace byte separates header and raster
            pos += 1;
            let bpp = if maxval > 255 { 2 } else { 1 };
            let body = bytes.get(pos..).unwrap_or(&[]);
            if body.len() < n * bpp {
                return Err(bad("truncated raster"));
            }
            for k in 0..n {
                let v = if bpp == 1 {
                    body[k] as usize
                } else {
                    ((body[2 * k] as usize) << 8) | body[2 * k + 1] as usize
                };
                values.push(v);
            }
        } else {
            for _ in 0..n {
                let tok = next_token(bytes, &mut pos).ok_or_else(|| bad("truncated raster"))?;
                let v: usize = std::str::from_utf8(&tok)
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("non-numeric sample"))?;
                values.push(v);
            }
        }
        Ok(Self {
            width,
            height,
            data: values.into_iter().map(|v| 2 * v >= maxval).collect(),
        })
    }

    /// Encodes as a raw graymap with foreground 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.data.iter().map(|&v| if v { 255u8 } else { 0 }));
        out
    }

    /// 8-connected components, largest first.
    pub fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let mut label = vec![false; self.data.len()];
        let mut comps = Vec::new();
        for start in 0..self.data.len() {
            if !self.data[start] || label[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::new();
            label[start] = true;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                let (x, y) = ((i % self.width) as isize, (i / self.width) as isize);
                comp.push((x as usize, y as usize));
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if self.get(nx, ny) {
                            let j = ny as usize * self.width + nx as usize;
                            if !label[j] {
                                label[j] = true;
                                queue.push_back(j);
                            }
                        }
                    }
                }
            }
            comps.push(comp);
        }
        // stable: equal sizes keep raster order
        comps.sort_by(|a, b| b.len().cmp(&a.len()));
        comps
    }

    /// Mask holding only the largest 8-connected component.
    pub fn largest_component(&self) -> Result<Self> {
        let comps = self.components();
        let first = comps.first().ok_or(Error::EmptyMask)?;
        let mut m = Self::new(self.width, self.height);
        for &(x, y) in first {
            m.set(x, y, true);
        }
        Ok(m)
    }

    /// Outer boundary of the largest component as pixel centres, in tracing
    /// order.
    pub fn trace_outer_boundary(&self) -> Result<Vec<(usize, usize)>> {
        let comp = self.largest_component()?;
        Ok(moore_trace(&comp))
    }

    /// Scanline fill of a polygon (even-odd rule, pixel centres sampled).
    pub fn fill_polygon<T: Real>(&mut self, poly: &[Point<T>]) {
        let n = poly.len();
        if n < 3 {
            return;
        }
        let mut xs: Vec<f64> = Vec::new();
        for y in 0..self.height {
            let yc = y as f64 + 0.5;
            xs.clear();
            for i in 0..n {
                let a = poly[i].cast::<f64>();
                let b = poly[(i + 1) % n].cast::<f64>();
                if (a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc) {
                    xs.push(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
            xs.sort_by(|a, b| a.total_cmp(b));
            for pair in xs.chunks(2) {
                if pair.len() < 2 {
                    break;
                }
                let x0 = (pair[0] - 0.5).ceil().max(0.0);
                let x1 = (pair[1] - 0.5).floor().min(self.width as f64 - 1.0);
                let mut x = x0;
                while x <= x1 {
                    self.set(x as usize, y, true);
                    x += 1.0;
                }
            }
        }
    }
}

fn bad(msg: &str) -> Error {
    Error::Parse(format!("graymap: {msg}"))
}

fn next_token(bytes: &[u8], pos: &mut usize) -> Option<Vec<u8>> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| bytes[start..*pos].to_vec())
}

/// Clockwise (in image coordinates, y down) neighbour ring starting west.
const RING: [(isize, isize); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

/// Moore-neighbour tracing with Jacob's stopping criterion: stop when the
/// start pixel is re-entered from the same backtrack neighbour.
fn moore_trace(mask: &BinaryMask) -> Vec<(usize, usize)> {
    let start = (0..mask.height)
        .flat_map(|y| (0..mask.width).map(move |x| (x, y)))
        .find(|&(x, y)| mask.get(x as isize, y as isize));
    let Some((sx, sy)) = start else {
        return Vec::new();
    };
    let s = (sx as isize, sy as isize);
    let b0 = (s.0 - 1, s.1);
    let mut cur = s;
    let mut back = b0;
    let mut out = vec![(sx, sy)];
    let limit = 8 * mask.count() + 16;
    for _ in 0..limit {
        let d = RING
            .iter()
            .position(|&(dx, dy)| (cur.0 + dx, cur.1 + dy) == back)
            .unwrap_or(0);
        let mut next = None;
        for k in 1..=8 {
            let idx = (d + k) % 8;
            let p = (cur.0 + RING[idx].0, cur.1 + RING[idx].1);
            if mask.get(p.0, p.1) {
                let prev = (d + k + 7) % 8;
                next = Some((p, (cur.0 + RING[prev].0, cur.1 + RING[prev].1)));
                break;
            }
        }
        let Some((p, b)) = next else {
            break;
        };
        cur = p;
        back = b;
        if cur == s && back == b0 {
            break;
        }
        out.push((cur.0 as usize, cur.1 as usize));
    }
    // the ring closes on the start pixel; drop a trailing repeat if any
    if out.len() > 1 && out.last() == out.first() {
        out.pop();
    }
    out
}
