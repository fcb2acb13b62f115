//! Pseudospectral laboratory for the defocusing mass-critical nonlinear
//! Schroedinger equation i u_t + Lap u = |u|^(4/n) u on a periodic box.
//!
//! The crate has three layers:
//! * spectral core: grids, transforms, radial Fourier multipliers including
//!   the high-frequency smoothing operator I, and Sobolev norms;
//! * dynamics and functionals: Strang split-step evolution, conserved
//!   quantities, spacetime norms, the modified energy, its production rate,
//!   and the pair Morawetz action;
//! * verification: seeded rough data, quantitative checks with pass/fail
//!   reports, parameter sweeps, and scaling experiments.
//!
//! Most capabilities have a runnable demonstration under `examples/`; the
//! thin `imethod-lab` binary drives the same code from JSON run configs.

pub mod error;
pub mod grid;
mod fft;
pub mod field;
pub mod multiplier;
pub mod dynamics;
pub mod functionals;
pub mod checkpoint;
pub mod checks;
pub mod cli;
pub mod config;
pub mod fit;
pub mod morawetz;
pub mod report;
pub mod rough;

pub use error::{Error, Result};
pub use field::{Field, SpectralField};
pub use grid::Grid;
