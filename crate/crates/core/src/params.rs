//! Tunable constants and their flat `key = value` configuration format.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Every constant used by the pipeline. Defaults reproduce the published
/// values where they exist.
#[derive(Debug, Clone, PartialEq)]
pub struct CostParams<T> {
    /// Complexity-cost weight.
    pub alpha_c: T,
    /// Scale-inconsistency weight.
    pub alpha_s: T,
    /// Angular-inconsistency weight.
    pub alpha_a: T,
    pub beta_a: T,
    pub beta_s: T,
    /// Penalty per unit of skipped contour weight.
    pub beta_skip: T,
    /// GS complexity range, degrees.
    pub c_min: T,
    pub c_max: T,
    /// Maximum geodesic gap between consecutive break-points, as a fraction
    /// of the contour length.
    pub d_k: T,
    pub n_orient: usize,
    /// Lower bound substituted for the complexity of near-straight GSs.
    pub complexity_floor: T,
    /// Orientation step cost of the directional distance transform, pixels.
    pub lambda: T,
    /// Saturation of chamfer lookups, pixels.
    pub tau_clamp: T,
    /// Square raster side, pixels.
    pub canvas_size: usize,
    /// Distance between the open-GS anchors, pixels.
    pub canonical_length: T,
    /// Every contour is resampled to this many points.
    pub contour_points: usize,
    /// Sharpness neighbourhood as a fraction of the contour length.
    pub sharpness_frac: T,
    pub sharpness_min: usize,
    /// Minimum angle sharpness of a high-curvature point, degrees.
    pub sharpness_threshold: T,
    /// Opposite-point search radius as a fraction of the contour length.
    pub opposite_frac: T,
    /// Minimum geodesic separation of an opposite point, fraction of length.
    pub opposite_gd_min: T,
    /// Opposite point must satisfy `ED <= ratio * arc length`.
    pub opposite_ed_ratio: T,
}

impl<T: Real> Default for CostParams<T> {
    fn default() -> Self {
        Self {
            alpha_c: T::lit(300.0),
            alpha_s: T::lit(200.0),
            alpha_a: T::lit(200.0),
            beta_a: T::lit(0.09),
            beta_s: T::lit(1.5),
            beta_skip: T::lit(210.0),
            c_min: T::lit(40.0),
            c_max: T::lit(600.0),
            d_k: T::lit(0.1),
            n_orient: 20,
            complexity_floor: T::lit(20.0),
            lambda: T::lit(4.0),
            tau_clamp: T::lit(40.0),
            canvas_size: 128,
            canonical_length: T::lit(100.0),
            contour_points: 200,
            sharpness_frac: T::lit(0.03),
            sharpness_min: 4,
            sharpness_threshold: T::lit(20.0),
            opposite_frac: T::lit(0.2),
            opposite_gd_min: T::lit(0.05),
            opposite_ed_ratio: T::lit(0.5),
        }
    }
}

const KEYS: &[&str] = &[
    "alpha_c",
    "alpha_s",
    "alpha_a",
    "beta_a",
    "beta_s",
    "beta_skip",
    "c_min",
    "c_max",
    "d_k",
    "n_orient",
    "complexity_floor",
    "lambda",
    "tau_clamp",
    "canvas_size",
    "canonical_length",
    "contour_points",
    "sharpness_frac",
    "sharpness_min",
    "sharpness_threshold",
    "opposite_frac",
    "opposite_gd_min",
    "opposite_ed_ratio",
];

impl<T: Real> CostParams<T> {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidParam {
            key: key.to_string(),
            reason: reason.to_string(),
        };
        let real = || value.trim().parse::<T>().map_err(|_| invalid("not a number"));
        let count = || {
            value
                .trim()
                .parse::<usize>()
                .map_err(|_| invalid("not a non-negative integer"))
        };
        match key {
            "alpha_c" => self.alpha_c = real()?,
            "alpha_s" => self.alpha_s = real()?,
            "alpha_a" => self.alpha_a = real()?,
            "beta_a" => self.beta_a = real()?,
            "beta_s" => self.beta_s = real()?,
            "beta_skip" => self.beta_skip = real()?,
            "c_min" => self.c_min = real()?,
            "c_max" => self.c_max = real()?,
            "d_k" => self.d_k = real()?,
            "n_orient" => self.n_orient = count()?,
            "complexity_floor" => self.complexity_floor = real()?,
            "lambda" => self.lambda = real()?,
            "tau_clamp" => self.tau_clamp = real()?,
            "canvas_size" => self.canvas_size = count()?,
            "canonical_length" => self.canonical_length = real()?,
            "contour_points" => self.contour_points = count()?,
            "sharpness_frac" => self.sharpness_frac = real()?,
            "sharpness_min" => self.sharpness_min = count()?,
            "sharpness_threshold" => self.sharpness_threshold = real()?,
            "opposite_frac" => self.opposite_frac = real()?,
            "opposite_gd_min" => self.opposite_gd_min = real()?,
            "opposite_ed_ratio" => self.opposite_ed_ratio = real()?,
            _ => return Err(invalid("unknown key")),
        }
        Ok(())
    }

    fn get(&self, key: &str) -> String {
        match key {
            "alpha_c" => self.alpha_c.to_string(),
            "alpha_s" => self.alpha_s.to_string(),
            "alpha_a" => self.alpha_a.to_string(),
            "beta_a" => self.beta_a.to_string(),
            "beta_s" => self.beta_s.to_string(),
            "beta_skip" => self.beta_skip.to_string(),
            "c_min" => self.c_min.to_string(),
            "c_max" => self.c_max.to_string(),
            "d_k" => self.d_k.to_string(),
            "n_orient" => self.n_orient.to_string(),
            "complexity_floor" => self.complexity_floor.to_string(),
            "lambda" => self.lambda.to_string(),
            "tau_clamp" => self.tau_clamp.to_string(),
            "canvas_size" => self.canvas_size.to_string(),
            "canonical_length" => self.canonical_length.to_string(),
            "contour_points" => self.contour_points.to_string(),
            "sharpness_frac" => self.sharpness_frac.to_string(),
            "sharpness_min" => self.sharpness_min.to_string(),
            "sharpness_threshold" => self.sharpness_threshold.to_string(),
            "opposite_frac" => self.opposite_frac.to_string(),
            "opposite_gd_min" => self.opposite_gd_min.to_string(),
            "opposite_ed_ratio" => self.opposite_ed_ratio.to_string(),
            _ => unreachable!("unknown key {key}"),
        }
    }

    /// Overlays `key = value` lines onto `self`. `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {}: expected key = value", lineno + 1))
            })?;
            self.set(k.trim(), v.trim())?;
        }
        self.validate()
    }

    /// Defaults overlaid with `text`.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut p = Self::default();
        p.apply_config(text)?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_config_str(&text)
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        for k in KEYS {
            let _ = writeln!(s, "{k} = {}", self.get(k));
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, reason: &str| {
            Err(Error::InvalidParam {
                key: key.to_string(),
                reason: reason.to_string(),
            })
        };
        let reals = [
            ("alpha_c", self.alpha_c),
            ("alpha_s", self.alpha_s),
            ("alpha_a", self.alpha_a),
            ("beta_a", self.beta_a),
            ("beta_s", self.beta_s),
            ("beta_skip", self.beta_skip),
            ("c_min", self.c_min),
            ("c_max", self.c_max),
            ("d_k", self.d_k),
            ("complexity_floor", self.complexity_floor),
            ("lambda", self.lambda),
            ("tau_clamp", self.tau_clamp),
            ("canonical_length", self.canonical_length),
            ("sharpness_frac", self.sharpness_frac),
            ("sharpness_threshold", self.sharpness_threshold),
            ("opposite_frac", self.opposite_frac),
            ("opposite_gd_min", self.opposite_gd_min),
            ("opposite_ed_ratio", self.opposite_ed_ratio),
        ];
        for (k, v) in reals {
            if !(v > T::zero()) || !v.is_finite() {
                return fail(k, "must be positive and finite");
            }
        }
        if self.c_min > self.c_max {
            return fail("c_min", "exceeds c_max");
        }
        if self.d_k > T::one() {
            return fail("d_k", "must lie in (0, 1]");
        }
        if self.n_orient == 0 || self.n_orient > 255 {
            return fail("n_orient", "must lie in 1..=255");
        }
        if self.contour_points < 8 {
            return fail("contour_points", "must be at least 8");
        }
        if self.sharpness_min < 1 {
            return fail("sharpness_min", "must be at least 1");
        }
        // distances are stored in thirds of a pixel in one byte
        if self.tau_clamp * T::lit(3.0) > T::lit(255.0) {
            return fail("tau_clamp", "must not exceed 85 pixels");
        }
        if self.canvas_size < 8
            || T::from_count(self.canvas_size) <= self.canonical_length
            || self.canvas_size > u16::MAX as usize
        {
            return fail("canvas_size", "must exceed canonical_length");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_published_values() {
        let p = CostParams::<f64>::default();
        assert_eq!(p.alpha_c, 300.0);
        assert_eq!((p.alpha_s, p.alpha_a), (200.0, 200.0));
        assert_eq!((p.beta_a, p.beta_s, p.beta_skip), (0.09, 1.5, 210.0));
        assert_eq!((p.c_min, p.c_max), (40.0, 600.0));
        assert_eq!(p.d_k, 0.1);
        assert_eq!(p.n_orient, 20);
        p.validate().unwrap();
    }

    #[test]
    fn config_round_trip() {
        let mut p = CostParams::<f64>::default();
        p.beta_skip = 150.5;
        p.canvas_size = 96;
        p.canonical_length = 70.0;
        let text = p.to_config_string();
        assert_eq!(CostParams::from_config_str(&text).unwrap(), p);
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let p = CostParams::<f64>::from_config_str("# tweak\nbeta_skip = 100\n\n").unwrap();
        assert_eq!(p.beta_skip, 100.0);
        assert_eq!(p.alpha_c, 300.0);
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(CostParams::<f64>::from_config_str("gamma = 1").is_err());
        assert!(CostParams::<f64>::from_config_str("alpha_c = -1").is_err());
        assert!(CostParams::<f64>::from_config_str("alpha_c = abc").is_err());
        assert!(CostParams::<f64>::from_config_str("alpha_c 3").is_err());
        assert!(CostParams::<f64>::from_config_str("tau_clamp = 90").is_err());
    }
}
