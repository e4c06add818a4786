//! Run configuration: flat key = value files, environment fallback for the
//! output directory, CLI overrides on top.
//!
//! Precedence (lowest to highest): built-in defaults, `GRAVPROBE_OUT`,
//! config file, command-line flags.

use std::fmt::Write as _;
use std::path::PathBuf;

use gravprobe::units::{UnitMode, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv|json)")),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub units: UnitMode,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub workers: usize,
    pub seed: u64,
    pub validate: bool,
    pub tolerance_override: Option<f64>,
    pub sweep_points: usize,
    pub probe_mass_kg: f64,
    pub free_p0_mev: f64,
    pub free_sigma_max_mev: f64,
    pub isw_a_min_nm: f64,
    pub isw_a_max_nm: f64,
    pub ho_omega_min: f64,
    pub ho_omega_max: f64,
    pub fsw_v0_max: f64,
    pub fsw_a_min: f64,
    pub fsw_a_max: f64,
    pub ho_t_max: f64,
    pub ho_gamma: f64,
    pub ratio_max_n: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            units: UnitMode::Natural,
            out_dir: PathBuf::from("gravprobe-out"),
            format: OutputFormat::Csv,
            workers: 0,
            seed: 20240,
            validate: true,
            tolerance_override: None,
            sweep_points: 200,
            probe_mass_kg: gravprobe::units::PROBE_MASS_SI,
            free_p0_mev: 1.0,
            free_sigma_max_mev: 30.0,
            isw_a_min_nm: 1.0,
            isw_a_max_nm: 10.0,
            ho_omega_min: 1e13,
            ho_omega_max: 1e14,
            fsw_v0_max: 30.0,
            fsw_a_min: 0.1,
            fsw_a_max: 10.0,
            ho_t_max: 2.0,
            ho_gamma: 1e-6,
            ratio_max_n: 50,
        }
    }
}

impl RunConfig {
    /// Apply the environment fallback (lowest precedence above defaults).
    pub fn apply_env(&mut self) {
        if let Ok(dir) = std::env::var("GRAVPROBE_OUT") {
            if !dir.is_empty() {
                self.out_dir = PathBuf::from(dir);
            }
        }
    }

    /// Merge keys from a flat config file body.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num(value: &str) -> Result<f64, String> {
            value
                .parse::<f64>()
                .map_err(|_| format!("'{value}' is not a number"))
        }
        match key {
            "units" => {
                self.units = match value {
                    "natural" => UnitMode::Natural,
                    "si" => UnitMode::Si,
                    other => return Err(format!("unknown units '{other}'")),
                }
            }
            "out" => self.out_dir = PathBuf::from(value),
            "format" => self.format = OutputFormat::parse(value)?,
            "workers" => {
                self.workers = value
                    .parse()
                    .map_err(|_| format!("'{value}' is not a worker count"))?
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| format!("'{value}' is not a seed"))?
            }
            "validate" => {
                self.validate = match value {
                    "on" | "true" => true,
                    "off" | "false" => false,
                    other => return Err(format!("validate must be on|off, got '{other}'")),
                }
            }
            "tolerance_override" => {
                self.tolerance_override = if value.is_empty() {
                    None
                } else {
                    Some(num(value)?)
                }
            }
            "sweep_points" => {
                self.sweep_points = value
                    .parse()
                    .map_err(|_| format!("'{value}' is not a point count"))?
            }
            "probe_mass_kg" => self.probe_mass_kg = num(value)?,
            "free_p0_mev" => self.free_p0_mev = num(value)?,
            "free_sigma_max_mev" => self.free_sigma_max_mev = num(value)?,
            "isw_a_min_nm" => self.isw_a_min_nm = num(value)?,
            "isw_a_max_nm" => self.isw_a_max_nm = num(value)?,
            "ho_omega_min" => self.ho_omega_min = num(value)?,
            "ho_omega_max" => self.ho_omega_max = num(value)?,
            "fsw_v0_max" => self.fsw_v0_max = num(value)?,
            "fsw_a_min" => self.fsw_a_min = num(value)?,
            "fsw_a_max" => self.fsw_a_max = num(value)?,
            "ho_t_max" => self.ho_t_max = num(value)?,
            "ho_gamma" => self.ho_gamma = num(value)?,
            "ratio_max_n" => {
                self.ratio_max_n = value
                    .parse()
                    .map_err(|_| format!("'{value}' is not a quantum number"))?
            }
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Serialize with a stable key order; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "units = {}",
            match self.units {
                UnitMode::Natural => "natural",
                UnitMode::Si => "si",
            }
        );
        let _ = writeln!(s, "out = {}", self.out_dir.display());
        let _ = writeln!(s, "format = {}", self.format.as_str());
        let _ = writeln!(s, "workers = {}", self.workers);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "validate = {}", if self.validate { "on" } else { "off" });
        if let Some(t) = self.tolerance_override {
            let _ = writeln!(s, "tolerance_override = {t:e}");
        }
        let _ = writeln!(s, "sweep_points = {}", self.sweep_points);
        let _ = writeln!(s, "probe_mass_kg = {:e}", self.probe_mass_kg);
        let _ = writeln!(s, "free_p0_mev = {:e}", self.free_p0_mev);
        let _ = writeln!(s, "free_sigma_max_mev = {:e}", self.free_sigma_max_mev);
        let _ = writeln!(s, "isw_a_min_nm = {:e}", self.isw_a_min_nm);
        let _ = writeln!(s, "isw_a_max_nm = {:e}", self.isw_a_max_nm);
        let _ = writeln!(s, "ho_omega_min = {:e}", self.ho_omega_min);
        let _ = writeln!(s, "ho_omega_max = {:e}", self.ho_omega_max);
        let _ = writeln!(s, "fsw_v0_max = {:e}", self.fsw_v0_max);
        let _ = writeln!(s, "fsw_a_min = {:e}", self.fsw_a_min);
        let _ = writeln!(s, "fsw_a_max = {:e}", self.fsw_a_max);
        let _ = writeln!(s, "ho_t_max = {:e}", self.ho_t_max);
        let _ = writeln!(s, "ho_gamma = {:e}", self.ho_gamma);
        let _ = writeln!(s, "ratio_max_n = {}", self.ratio_max_n);
        s
    }

    /// Invariants: counts >= 2, ranges ordered, physical parameters
    /// positive.
    pub fn validate_invariants(&self) -> Result<(), String> {
        if self.sweep_points < 2 {
            return Err("sweep_points must be >= 2".into());
        }
        for (name, v) in [
            ("probe_mass_kg", self.probe_mass_kg),
            ("free_p0_mev", self.free_p0_mev),
            ("free_sigma_max_mev", self.free_sigma_max_mev),
            ("isw_a_min_nm", self.isw_a_min_nm),
            ("ho_omega_min", self.ho_omega_min),
            ("fsw_a_min", self.fsw_a_min),
            ("fsw_v0_max", self.fsw_v0_max),
            ("ho_t_max", self.ho_t_max),
            ("ho_gamma", self.ho_gamma),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{name} must be strictly positive"));
            }
        }
        for (name, lo, hi) in [
            ("isw_a range", self.isw_a_min_nm, self.isw_a_max_nm),
            ("ho_omega range", self.ho_omega_min, self.ho_omega_max),
            ("fsw_a range", self.fsw_a_min, self.fsw_a_max),
        ] {
            if !(lo < hi) {
                return Err(format!("{name}: start must be below stop ({lo} vs {hi})"));
            }
        }
        if self.ratio_max_n < 2 || self.ratio_max_n > 50 {
            return Err("ratio_max_n must lie in [2, 50]".into());
        }
        Ok(())
    }

    pub fn unit_system(&self) -> UnitSystem {
        match self.units {
            UnitMode::Natural => UnitSystem::natural(),
            UnitMode::Si => UnitSystem::si_with_mass(self.probe_mass_kg),
        }
    }

    /// FNV-1a hash of the canonical serialization, excluding the output
    /// directory (file placement is not computation content); stamped into
    /// outputs so identical runs are byte-identical wherever they land.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for line in self.to_text().lines() {
            if line.starts_with("out = ") {
                continue;
            }
            for b in line.bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
            h ^= b'\n' as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let mut config = RunConfig::default();
        config
            .apply_text("units = si\nseed = 7\n# comment\nfsw_v0_max = 12.5\n")
            .unwrap();
        let text = config.to_text();
        let mut reparsed = RunConfig::default();
        reparsed.apply_text(&text).unwrap();
        assert_eq!(config, reparsed);
        assert_eq!(text, reparsed.to_text());
    }

    #[test]
    fn rejects_bad_keys_and_values() {
        let mut config = RunConfig::default();
        assert!(config.apply_text("nope = 1\n").is_err());
        assert!(config.apply_text("units = metric\n").is_err());
        assert!(config.apply_text("seed\n").is_err());
    }

    #[test]
    fn invariants_catch_bad_ranges() {
        let mut config = RunConfig::default();
        config.set("isw_a_min_nm", "10").unwrap();
        config.set("isw_a_max_nm", "1").unwrap();
        assert!(config.validate_invariants().is_err());
        let mut config = RunConfig::default();
        config.set("sweep_points", "1").unwrap();
        assert!(config.validate_invariants().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        b.set("seed", "7").unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), RunConfig::default().hash());
    }
}
