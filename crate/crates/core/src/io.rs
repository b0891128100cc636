//! Contour ingestion from point lists and graymap masks.

use std::path::Path;

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mask::BinaryMask;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourFormat {
    /// UTF-8 text, one `x y` pair per line.
    PointList,
    /// Binary portable graymap (`P2` or `P5`).
    GraymapMask,
}

impl ContourFormat {
    /// `.pgm` files are masks; anything else is read as a point list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("pgm") => ContourFormat::GraymapMask,
            _ => ContourFormat::PointList,
        }
    }
}

pub fn load_contour<T: Real>(path: &Path, format: ContourFormat) -> Result<Contour<T>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    match format {
        ContourFormat::PointList => {
            let text = std::str::from_utf8(&bytes)
                .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
            parse_point_list(text)
        }
        ContourFormat::GraymapMask => contour_from_mask(&BinaryMask::from_pgm(&bytes)?),
    }
}

/// Parses whitespace-separated `x y` lines. Blank lines and `#` comments are
/// ignored.
pub fn parse_point_list<T: Real>(text: &str) -> Result<Contour<T>> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut coord = || -> Result<T> {
            it.next()
                .and_then(|s| s.parse::<T>().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: expected `x y`", lineno + 1)))
        };
        let x = coord()?;
        let y = coord()?;
        pts.push(Point::new(x, y));
    }
    Contour::new(pts)
}

pub fn format_point_list<T: Real>(c: &Contour<T>) -> String {
    let mut s = String::with_capacity(c.len() * 24);
    for p in c.points() {
        s.push_str(&format!("{} {}\n", p.x, p.y));
    }
    s
}

/// Traces the outer boundary of the largest foreground component.
pub fn contour_from_mask<T: Real>(mask: &BinaryMask) -> Result<Contour<T>> {
    let boundary = mask.trace_outer_boundary()?;
    if boundary.len() < 3 {
        return Err(Error::TooFewPoints(boundary.len()));
    }
    Contour::new(
        boundary
            .into_iter()
            .map(|(x, y)| Point::new(T::from_count(x), T::from_count(y)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn point_list_triangle() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "0 0\n1 0\n0 1").unwrap();
        let c: Contour<f64> = load_contour(f.path(), ContourFormat::PointList).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn malformed_point_list() {
        assert!(parse_point_list::<f64>("0 0\n1\n0 1\n").is_err());
        assert!(parse_point_list::<f64>("0 0\n1 0\n").is_err());
    }

    #[test]
    fn missing_file_reports_io() {
        let r = load_contour::<f64>(Path::new("/nonexistent/shape.txt"), ContourFormat::PointList);
        assert!(matches!(r, Err(Error::Io { .. })));
    }

    #[test]
    fn mask_square_gives_36_points() {
        let m = BinaryMask::from_fn(14, 14, |x, y| (2..12).contains(&x) && (2..12).contains(&y));
        let mut f = tempfile::Builder::new().suffix(".pgm").tempfile().unwrap();
        f.write_all(&m.to_pgm()).unwrap();
        let fmt = ContourFormat::from_path(f.path());
        assert_eq!(fmt, ContourFormat::GraymapMask);
        let c: Contour<f64> = load_contour(f.path(), fmt).unwrap();
        assert_eq!(c.len(), 36);
        assert!(c.signed_area() > 0.0);
    }

    #[test]
    fn all_zero_mask_is_empty() {
        let m = BinaryMask::new(8, 8);
        assert!(matches!(contour_from_mask::<f64>(&m), Err(Error::EmptyMask)));
    }
}
