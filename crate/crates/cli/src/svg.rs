//! Side-by-side SVG rendering of a match decomposition.

use std::fmt::Write as _;

use gsmatch_core::dp::MatchResult;
use gsmatch_core::geometry::Point;
use gsmatch_core::shape::ShapeBundle;

#[derive(Debug, Clone)]
pub struct RenderSpec {
    /// Colors cycled over matched pairs; pair `k` uses the same color in both
    /// panels.
    pub pair_colors: Vec<&'static str>,
    /// Skipped segments.
    pub skip_color: &'static str,
    pub pair_width: f64,
    pub skip_width: f64,
    /// Side of each square panel.
    pub panel: f64,
    pub margin: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            pair_colors: vec![
                "#e6194b", "#3cb44b", "#ffb000", "#4363d8", "#f58231", "#911eb4", "#008080", "#f032e6", "#9a6324",
                "#800000", "#808000", "#000075",
            ],
            skip_color: "#8fd3f4",
            pair_width: 3.0,
            skip_width: 2.0,
            panel: 320.0,
            margin: 20.0,
        }
    }
}

impl RenderSpec {
    pub fn pair_color(&self, k: usize) -> &'static str {
        self.pair_colors[k % self.pair_colors.len()]
    }
}

/// Maps a shape's points into the panel at horizontal offset `x0`, y up.
struct Frame {
    scale: f64,
    min: Point<f64>,
    x0: f64,
    extent: Point<f64>,
    spec_margin: f64,
    panel: f64,
}

impl Frame {
    fn new(points: &[Point<f64>], x0: f64, spec: &RenderSpec) -> Self {
        let (mut min, mut max) = (points[0], points[0]);
        for q in points {
            min = Point::new(min.x.min(q.x), min.y.min(q.y));
            max = Point::new(max.x.max(q.x), max.y.max(q.y));
        }
        let extent = max - min;
        let room = spec.panel - 2.0 * spec.margin;
        let scale = room / extent.x.max(extent.y).max(f64::EPSILON);
        Self {
            scale,
            min,
            x0,
            extent,
            spec_margin: spec.margin,
            panel: spec.panel,
        }
    }

    fn map(&self, q: Point<f64>) -> (f64, f64) {
        let pad_x = (self.panel - 2.0 * self.spec_margin - self.extent.x * self.scale) / 2.0;
        let pad_y = (self.panel - 2.0 * self.spec_margin - self.extent.y * self.scale) / 2.0;
        let x = self.x0 + self.spec_margin + pad_x + (q.x - self.min.x) * self.scale;
        let y = self.panel - (self.spec_margin + pad_y + (q.y - self.min.y) * self.scale);
        (x, y)
    }
}

/// Points of segments `start..start + count` (cyclic), joined.
fn run_points(b: &ShapeBundle<f64>, start: usize, count: usize) -> Vec<Point<f64>> {
    let n = b.n_segments();
    let len = b.contour.len();
    let from = b.breakpoints[start % n].index.0;
    let to = b.breakpoints[(start + count) % n].index.0;
    let mut steps = (to + len - from) % len;
    if steps == 0 {
        steps = len;
    }
    (0..=steps).map(|k| b.contour.points()[(from + k) % len]).collect()
}

fn polyline(out: &mut String, frame: &Frame, pts: &[Point<f64>], color: &str, width: f64) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&q| {
            let (x, y) = frame.map(q);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}" stroke-linejoin="round"/>"#,
        coords.join(" ")
    );
}

/// Shape `a` on the left, `b` on the right. Each matched GS pair is drawn in
/// its own color on both sides, skipped segments in the skip color, and
/// break-points as small dots.
pub fn render(a: &ShapeBundle<f64>, b: &ShapeBundle<f64>, r: &MatchResult<f64>, spec: &RenderSpec) -> String {
    let width = 2.0 * spec.panel;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{h}" viewBox="0 0 {width} {h}">"#,
        h = spec.panel
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{}" fill="white"/>"#, spec.panel);
    let ml = &r.match_list;
    for (side, bundle) in [(0usize, a), (1, b)] {
        let frame = Frame::new(bundle.contour.points(), side as f64 * spec.panel, spec);
        let _ = writeln!(out, r#"<g id="shape-{}">"#, if side == 0 { "a" } else { "b" });
        let skipped = if side == 0 { &ml.skipped1 } else { &ml.skipped2 };
        for s in skipped {
            polyline(&mut out, &frame, &run_points(bundle, s.index, 1), spec.skip_color, spec.skip_width);
        }
        for (k, m) in ml.pairs.iter().enumerate() {
            let gs = if side == 0 { &m.gs1 } else { &m.gs2 };
            let _ = writeln!(out, r#"<g class="pair-{k}">"#);
            polyline(&mut out, &frame, &run_points(bundle, gs.start_seg, gs.seg_count), spec.pair_color(k), spec.pair_width);
            let _ = writeln!(out, "</g>");
        }
        for bp in &bundle.breakpoints {
            let (x, y) = frame.map(bundle.contour.points()[bp.index.0]);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}
