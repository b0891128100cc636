//! On-disk cache of break-points and pair costs, keyed by content hashes so
//! that a changed shape or parameter set never reuses stale results.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use gsmatch_core::breakpoints::{format_breakpoints, parse_breakpoints, BreakPoint};
use gsmatch_core::contour::Contour;
use gsmatch_core::io::format_point_list;
use gsmatch_core::params::CostParams;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn params_hash(p: &CostParams<f64>) -> String {
    hex(&Sha256::digest(p.to_config_string().as_bytes()))
}

/// Hash of the contour's points together with the parameters.
pub fn shape_key(c: &Contour<f64>, p: &CostParams<f64>) -> String {
    let mut h = Sha256::new();
    h.update(format_point_list(c).as_bytes());
    h.update(b"\0");
    h.update(p.to_config_string().as_bytes());
    hex(&h.finalize())
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

const COSTS: &str = "pair_costs.txt";

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir.join("breakpoints")).map_err(|e| Error::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    /// Removes everything cached.
    pub fn clear(&self) -> Result<()> {
        if self.dir.exists() {
            std::fs::remove_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        }
        std::fs::create_dir_all(self.dir.join("breakpoints")).map_err(|e| Error::io(&self.dir, e))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn bp_path(&self, key: &str) -> PathBuf {
        self.dir.join("breakpoints").join(format!("{key}.txt"))
    }

    pub fn load_breakpoints(&self, key: &str) -> Option<Vec<BreakPoint<f64>>> {
        let text = std::fs::read_to_string(self.bp_path(key)).ok()?;
        parse_breakpoints(&text).ok()
    }

    pub fn store_breakpoints(&self, key: &str, bps: &[BreakPoint<f64>]) -> Result<()> {
        write_atomic(&self.bp_path(key), format_breakpoints(bps).as_bytes())
    }

    /// Costs keyed by `(key_a, key_b)` in the order they were matched.
    pub fn load_costs(&self) -> HashMap<(String, String), f64> {
        let Ok(text) = std::fs::read_to_string(self.dir.join(COSTS)) else {
            return HashMap::new();
        };
        text.lines()
            .filter_map(|l| {
                let mut it = l.split_whitespace();
                let a = it.next()?.to_string();
                let b = it.next()?.to_string();
                let c = it.next()?.parse().ok()?;
                Some(((a, b), c))
            })
            .collect()
    }

    /// Rewrites the cost file with `costs`.
    pub fn store_costs(&self, costs: &HashMap<(String, String), f64>) -> Result<()> {
        let mut lines: Vec<String> = costs.iter().map(|((a, b), c)| format!("{a} {b} {c}")).collect();
        lines.sort();
        let mut text = lines.join("\n");
        text.push('\n');
        write_atomic(&self.dir.join(COSTS), text.as_bytes())
    }
}
