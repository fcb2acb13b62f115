//! Seeded synthesis of low-regularity initial data.
//!
//! The spectrum is shaped so the field lands in H^sigma exactly for
//! sigma < s + delta as the grid is refined: coefficient magnitudes follow
//! |u_hat(xi)| = amplitude (1 + |xi|^2)^(-(s + n/2 + delta)/2) and the phases
//! are independent uniforms. Magnitudes are deterministic, so every norm of
//! the output depends only on (grid, s, delta, amplitude); the seed moves
//! phases only. One phase is drawn per lattice site in storage order, which
//! makes the output bit-identical for a given seed.

use crate::error::{Error, Result};
use crate::field::{transform_inverse, Field, SpectralField};
use crate::grid::Grid;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughDataSpec {
    /// Target regularity exponent, in (0, 1].
    pub s: f64,
    /// Extra decay margin keeping the H^s norm grid-convergent.
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub amplitude: f64,
    pub seed: u64,
}

fn default_delta() -> f64 {
    0.05
}

impl RoughDataSpec {
    pub fn new(s: f64, amplitude: f64, seed: u64) -> Self {
        Self {
            s,
            delta: default_delta(),
            amplitude,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::Config(format!(
                "rough data needs s in (0, 1], got {}",
                self.s
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!(
                "rough data needs delta > 0, got {}",
                self.delta
            )));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Config(format!(
                "rough data needs amplitude > 0, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }
}

/// Draw a rough field on the given grid; bit-identical for a fixed spec.
pub fn synthesize(grid: Grid, spec: &RoughDataSpec) -> Result<Field> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let decay = -(spec.s + grid.dim() as f64 / 2.0 + spec.delta) / 2.0;
    let freq_sq = grid.freq_sq_table();
    let mut out = SpectralField::zeros(grid);
    for (v, &r2) in out.coeffs_mut().iter_mut().zip(&freq_sq) {
        let magnitude = spec.amplitude * (1.0 + r2).powf(decay);
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        *v = Complex64::from_polar(magnitude, phase);
    }
    Ok(transform_inverse(&out))
}
