//! Labelled shape collections stored as one file per shape, named
//! `<class>-<instance>.<ext>`.

use std::collections::BTreeMap;
use std::path::Path;

use gsmatch_core::contour::Contour;
use gsmatch_core::io::{contour_from_mask, format_point_list, load_contour, ContourFormat};
use gsmatch_core::mask::BinaryMask;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub id: String,
    pub label: String,
    pub contour: Contour<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub entries: Vec<Entry>,
    /// Files that looked like shapes but could not be loaded: `(file, reason)`.
    pub failures: Vec<(String, String)>,
}

/// Splits `<class>-<instance>` at the last dash.
pub fn parse_id(stem: &str) -> Option<(&str, &str)> {
    let (class, inst) = stem.rsplit_once('-')?;
    (!class.is_empty() && !inst.is_empty()).then_some((class, inst))
}

fn is_image(ext: &str) -> bool {
    matches!(ext, "gif" | "png" | "bmp")
}

/// Foreground is every pixel brighter than mid-grey.
fn load_image(path: &Path) -> Result<Contour<f64>> {
    let img = image::open(path)
        .map_err(|e| Error::Image {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?
        .to_luma8();
    let mask = BinaryMask::from_fn(img.width() as usize, img.height() as usize, |x, y| {
        img.get_pixel(x as u32, y as u32)[0] > 127
    });
    Ok(contour_from_mask(&mask)?)
}

pub fn load_shape(path: &Path) -> Result<Contour<f64>> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    if is_image(&ext) {
        load_image(path)
    } else {
        Ok(load_contour(path, ContourFormat::from_path(path))?)
    }
}

/// Orders instance names numerically when they are numbers.
fn sort_key(e: &Entry) -> (String, u64, String) {
    let inst = parse_id(&e.id).map(|(_, i)| i).unwrap_or("");
    (e.label.clone(), inst.parse().unwrap_or(u64::MAX), e.id.clone())
}

impl Dataset {
    /// Loads every `<class>-<instance>.<ext>` file in `dir`. Unreadable shapes
    /// are recorded in `failures`; a directory without any shape is an error.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let rd = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut ds = Dataset::default();
        for item in rd {
            let path = item.map_err(|e| Error::io(dir, e))?.path();
            if !path.is_file() {
                continue;
            }
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            if stem.starts_with('.') {
                continue;
            }
            let Some((label, _)) = parse_id(stem) else {
                continue;
            };
            match load_shape(&path) {
                Ok(contour) => ds.entries.push(Entry {
                    id: stem.to_string(),
                    label: label.to_string(),
                    contour,
                }),
                Err(e) => ds.failures.push((path.display().to_string(), e.to_string())),
            }
        }
        if ds.entries.is_empty() {
            return Err(Error::Invalid(format!("no shapes found in {}", dir.display())));
        }
        ds.sort();
        let mut seen = std::collections::HashSet::new();
        for e in &ds.entries {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate shape id `{}`", e.id)));
            }
        }
        Ok(ds)
    }

    pub fn from_entries(entries: Vec<Entry>) -> Self {
        let mut ds = Self {
            entries,
            failures: Vec::new(),
        };
        ds.sort();
        ds
    }

    fn sort(&mut self) {
        self.entries.sort_by_key(sort_key);
    }

    /// Writes each contour as a point list `<id>.txt`.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for e in &self.entries {
            let path = dir.join(format!("{}.txt", e.id));
            crate::cache::write_atomic(&path, format_point_list(&e.contour).as_bytes())?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.id.clone()).collect()
    }

    /// Shape count per class.
    pub fn class_sizes(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.label.clone()).or_insert(0) += 1;
        }
        m
    }

    /// The first `classes` classes in name order, with the first `per_class`
    /// instances of each.
    pub fn subset(&self, classes: usize, per_class: usize) -> Self {
        let keep: Vec<String> = self.class_sizes().into_keys().take(classes).collect();
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        let entries = self
            .entries
            .iter()
            .filter(|e| {
                if !keep.contains(&e.label) {
                    return false;
                }
                let c = count.entry(e.label.as_str()).or_insert(0);
                *c += 1;
                *c <= per_class
            })
            .cloned()
            .collect();
        Self::from_entries(entries)
    }
}
