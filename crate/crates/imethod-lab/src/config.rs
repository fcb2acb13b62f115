//! Run configuration: a JSON document describing one experiment.
//!
//! Configurations are strict (unknown keys are rejected) and content
//! addressed: the canonical form is the compact JSON serialization of the
//! parsed document, and its SHA-256 prefix names the output directory, so a
//! given configuration always lands in the same place and edits never
//! silently reuse stale results.

use crate::dynamics::StepConfig;
use crate::error::{Error, Result};
use crate::field::{gaussian, plane_wave, Field};
use crate::grid::Grid;
use crate::rough::{synthesize, RoughDataSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    PlaneWave {
        /// Complex amplitude as an [re, im] pair.
        amplitude: Complex64,
        wavevector: Vec<i64>,
    },
    Rough {
        s: f64,
        #[serde(default = "default_rough_delta")]
        delta: f64,
        amplitude: f64,
        seed: u64,
    },
}

fn default_rough_delta() -> f64 {
    0.05
}

/// One named check to run, with an optional budget whose meaning is
/// check-specific (a ratio cap, a consistency tolerance, a defect constant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRequest {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub grid_points: usize,
    pub box_length: f64,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: usize,
    #[serde(default)]
    pub dealias: bool,
    /// Regularity parameter of the smoothing operator.
    pub s: f64,
    /// Single smoothing threshold, for checks that need one.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Threshold sweep, for checks that scan over N.
    #[serde(rename = "N_list", default, skip_serializing_if = "Option::is_none")]
    pub threshold_list: Option<Vec<f64>>,
    /// Dilation factor for scaling checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    pub initial_data: InitialData,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad run configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.step_config().validate()?;
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::Config(format!("s must lie in (0, 1], got {}", self.s)));
        }
        if let Some(n) = self.threshold {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::Config(format!("N must be positive, got {n}")));
            }
        }
        if let Some(list) = &self.threshold_list {
            if list.is_empty() {
                return Err(Error::Config("N_list must not be empty".into()));
            }
            for &n in list {
                if !(n > 0.0 && n.is_finite()) {
                    return Err(Error::Config(format!("N_list entries must be positive, got {n}")));
                }
            }
        }
        if let Some(l) = self.lambda {
            if l == 0 || !l.is_power_of_two() {
                return Err(Error::Config(format!(
                    "lambda must be a positive power of two, got {l}"
                )));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dimension, self.grid_points, self.box_length)
    }

    pub fn step_config(&self) -> StepConfig {
        StepConfig {
            dt: self.dt,
            t_final: self.t_final,
            snapshot_stride: self.snapshot_stride,
            dealias: self.dealias,
        }
    }

    /// Construct the initial state; a seed override rewires rough data and is
    /// ignored by deterministic shapes.
    pub fn initial_state(&self, seed_override: Option<u64>) -> Result<Field> {
        let grid = self.grid()?;
        match &self.initial_data {
            InitialData::Gaussian { amplitude, width, center } => {
                gaussian(grid, *amplitude, *width, center.as_deref())
            }
            InitialData::PlaneWave { amplitude, wavevector } => {
                plane_wave(grid, *amplitude, wavevector)
            }
            InitialData::Rough { s, delta, amplitude, seed } => {
                let spec = RoughDataSpec {
                    s: *s,
                    delta: *delta,
                    amplitude: *amplitude,
                    seed: seed_override.unwrap_or(*seed),
                };
                synthesize(grid, &spec)
            }
        }
    }

    /// Apply command-line overrides, producing the configuration that is
    /// actually run (and hashed).
    pub fn with_overrides(mut self, out: Option<&Path>, seed: Option<u64>) -> Self {
        if let Some(dir) = out {
            self.output_dir = Some(dir.to_path_buf());
        }
        if let Some(seed) = seed {
            if let InitialData::Rough { seed: s, .. } = &mut self.initial_data {
                *s = seed;
            }
        }
        self
    }

    /// Compact serialization with a fixed field order; the basis of the hash.
    /// The output directory is a location, not experiment content, so it is
    /// dropped before hashing and relocating a run never changes its name.
    pub fn canonical_json(&self) -> String {
        let mut scrubbed = self.clone();
        scrubbed.output_dir = None;
        serde_json::to_string(&scrubbed).expect("run configuration serializes")
    }

    /// Hex SHA-256 of the canonical form.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Directory all artifacts of this configuration land in.
    pub fn run_dir(&self) -> PathBuf {
        let base = self
            .output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs"));
        base.join(format!("run-{}", &self.content_hash()[..16]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> &'static str {
        r#"{
            "dimension": 1,
            "grid_points": 32,
            "box_length": 6.283185307179586,
            "dt": 1e-3,
            "t_final": 0.1,
            "snapshot_stride": 10,
            "s": 0.6,
            "N": 4.0,
            "initial_data": { "gaussian": { "amplitude": 1.0, "width": 0.5 } },
            "checks": [ { "name": "frequency_tail" } ]
        }"#
    }

    #[test]
    fn parses_and_rebuilds_canonically() {
        let cfg = RunConfig::from_json(sample()).unwrap();
        assert_eq!(cfg.grid_points, 32);
        assert!(!cfg.dealias);
        let canon = cfg.canonical_json();
        let again = RunConfig::from_json(&canon).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.content_hash(), again.content_hash());
    }

    #[test]
    fn hash_ignores_formatting_but_sees_content() {
        let cfg = RunConfig::from_json(sample()).unwrap();
        let reformatted = sample().replace('\n', " ");
        let same = RunConfig::from_json(&reformatted).unwrap();
        assert_eq!(cfg.content_hash(), same.content_hash());
        let other = RunConfig::from_json(&sample().replace("0.6", "0.7")).unwrap();
        assert_ne!(cfg.content_hash(), other.content_hash());
    }

    #[test]
    fn rejects_unknown_keys_at_any_level() {
        let top = sample().replace("\"s\": 0.6,", "\"s\": 0.6, \"extra\": 1,");
        assert!(RunConfig::from_json(&top).is_err());
        let nested = sample().replace("\"width\": 0.5", "\"width\": 0.5, \"sigma\": 2");
        assert!(RunConfig::from_json(&nested).is_err());
    }

    #[test]
    fn validates_grid_and_stepping() {
        let bad_grid = sample().replace("\"grid_points\": 32", "\"grid_points\": 17");
        assert!(RunConfig::from_json(&bad_grid).is_err());
        let bad_dt = sample().replace("\"dt\": 1e-3", "\"dt\": 3e-3");
        assert!(RunConfig::from_json(&bad_dt).is_err(), "t_final/dt must be integral");
        let bad_s = sample().replace("\"s\": 0.6", "\"s\": 1.5");
        assert!(RunConfig::from_json(&bad_s).is_err());
    }

    #[test]
    fn seed_override_reaches_rough_data_only() {
        let rough = sample().replace(
            r#""initial_data": { "gaussian": { "amplitude": 1.0, "width": 0.5 } }"#,
            r#""initial_data": { "rough": { "s": 0.5, "amplitude": 1.0, "seed": 3 } }"#,
        );
        let cfg = RunConfig::from_json(&rough).unwrap();
        let overridden = cfg.clone().with_overrides(None, Some(99));
        match overridden.initial_data {
            InitialData::Rough { seed, .. } => assert_eq!(seed, 99),
            _ => unreachable!(),
        }
        assert_ne!(cfg.content_hash(), overridden.content_hash());
        let a = cfg.initial_state(Some(99)).unwrap();
        let b = overridden.initial_state(None).unwrap();
        assert_eq!(a.values(), b.values());

        let smooth = RunConfig::from_json(sample()).unwrap();
        let same = smooth.clone().with_overrides(None, Some(99));
        assert_eq!(smooth.content_hash(), same.content_hash());
    }

    #[test]
    fn plane_wave_amplitude_round_trips_through_json() {
        let text = sample().replace(
            r#""initial_data": { "gaussian": { "amplitude": 1.0, "width": 0.5 } }"#,
            r#""initial_data": { "plane_wave": { "amplitude": [0.5, -0.25], "wavevector": [3] } }"#,
        );
        let cfg = RunConfig::from_json(&text).unwrap();
        let state = cfg.initial_state(None).unwrap();
        let expected = Complex64::new(0.5, -0.25);
        assert!((state.values()[0] - expected).norm() <= 1e-12);
        let canon = cfg.canonical_json();
        assert!(canon.contains("plane_wave"));
        assert_eq!(RunConfig::from_json(&canon).unwrap(), cfg);
    }

    #[test]
    fn run_dir_is_content_addressed() {
        let cfg = RunConfig::from_json(sample()).unwrap();
        let dir = cfg.run_dir();
        assert!(dir.starts_with("runs"));
        let name = dir.file_name().unwrap().to_string_lossy().into_owned();
        assert!(name.starts_with("run-") && name.len() == 4 + 16, "{name}");
        let moved = cfg.clone().with_overrides(Some(Path::new("/tmp/x")), None);
        assert!(moved.run_dir().starts_with("/tmp/x"));
        assert_eq!(moved.run_dir().file_name(), dir.file_name());
    }
}
