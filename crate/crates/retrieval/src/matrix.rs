//! Square matrices of match costs and their plain-text form.

use std::path::Path;

use crate::cache::write_atomic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    /// Row-major; `NaN` where a shape could not be prepared.
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(ids: Vec<String>) -> Self {
        let n = ids.len();
        Self {
            ids,
            data: vec![f64::NAN; n * n],
        }
    }

    pub fn from_rows(ids: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("distance matrix must be square and match its ids".into()));
        }
        Ok(Self {
            ids,
            data: rows.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.len();
        self.data[i * n + j] = v;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.data[i * n..(i + 1) * n]
    }

    /// Rows whose off-diagonal entries are all finite.
    pub fn valid(&self) -> Vec<bool> {
        (0..self.len())
            .map(|i| (0..self.len()).all(|j| {
                i == j || self.get(i, j).is_finite() || !self.get(j, j).is_finite()
            }) && self.get(i, i).is_finite())
            .collect()
    }

    /// Largest `|D(i, j) - D(j, i)|` over finite entries.
    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let d = (self.get(i, j) - self.get(j, i)).abs();
                if d.is_finite() {
                    worst = worst.max(d);
                }
            }
        }
        worst
    }

    /// Header line of ids, then one line of costs per row.
    pub fn to_text(&self) -> String {
        let mut s = self.ids.join(" ");
        s.push('\n');
        for i in 0..self.len() {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let ids: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Invalid("empty distance matrix".into()))?
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let rows = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|v| v.parse::<f64>().map_err(|_| Error::Invalid(format!("bad cost `{v}`"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ids, &rows)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
