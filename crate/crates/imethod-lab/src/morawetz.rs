//! Pair Morawetz action for the smoothed field in three dimensions.
//!
//! With w = I u, density rho = |w|^2, and momentum density
//! p = Im(conj(w) grad w), the action is
//!     M = -2 int p(x) . (K * rho)(x) dx,      K(r) = r/|r|, K(0) = 0.
//! This is the pair integral int int grad a(x - y) . Im(v d v-bar) over both
//! copies of space with weight a(x, y) = |x - y| and v = w(x) w(y), collapsed
//! to one convolution by the antisymmetry of K. Under this sign convention M
//! is negative for separating wave packets and positive for approaching ones.
//!
//! The convolution is linear, not periodic: arrays are zero-padded to 2G per
//! axis and the kernel is sampled at the direct offsets in (-L, L)^3, so every
//! pair of grid points in the fundamental cell interacts exactly once through
//! its unwrapped displacement. Cauchy-Schwarz gives the
//! a priori cap |M| <= 2 sqrt(2) |w|_{L^2}^3 |grad w|_{L^2}, which holds for
//! the discrete sums verbatim.

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::field::{transform_forward, transform_inverse, Field};
use crate::functionals::momentum_density;
use crate::multiplier::{apply_multiplier_spectral, Multiplier};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    /// Forward transforms of the three kernel components, keyed by (G, L bits).
    static KERNELS: RefCell<HashMap<(usize, u64), Arc<[Vec<Complex64>; 3]>>> =
        RefCell::new(HashMap::new());
}

fn kernel_transforms(g: usize, l: f64, dx: f64) -> Arc<[Vec<Complex64>; 3]> {
    KERNELS.with(|cell| {
        let mut cache = cell.borrow_mut();
        cache
            .entry((g, l.to_bits()))
            .or_insert_with(|| {
                let d = 2 * g;
                let total = d * d * d;
                let mut comps = [
                    vec![Complex64::default(); total],
                    vec![Complex64::default(); total],
                    vec![Complex64::default(); total],
                ];
                // Offset index i maps to o = i for i < G, i - 2G otherwise,
                // covering minimal-image displacements o*dx in [-L, L).
                let offset = |i: usize| -> f64 {
                    let o = if i < g { i as i64 } else { i as i64 - 2 * g as i64 };
                    o as f64 * dx
                };
                let mut flat = 0usize;
                for i0 in 0..d {
                    let r0 = offset(i0);
                    for i1 in 0..d {
                        let r1 = offset(i1);
                        for i2 in 0..d {
                            let r2 = offset(i2);
                            let norm = (r0 * r0 + r1 * r1 + r2 * r2).sqrt();
                            if norm > 0.0 {
                                comps[0][flat] = Complex64::new(r0 / norm, 0.0);
                                comps[1][flat] = Complex64::new(r1 / norm, 0.0);
                                comps[2][flat] = Complex64::new(r2 / norm, 0.0);
                            }
                            flat += 1;
                        }
                    }
                }
                for c in comps.iter_mut() {
                    fft_nd(c, 3, d, true);
                }
                Arc::new(comps)
            })
            .clone()
    })
}

/// Morawetz action of the smoothed field I u; three dimensions only.
pub fn morawetz_action(f: &Field, threshold: f64, s: f64) -> Result<f64> {
    let grid = f.grid();
    if grid.dim() != 3 {
        return Err(Error::Functional(format!(
            "the pair Morawetz action is defined for n = 3, got n = {}",
            grid.dim()
        )));
    }
    let m = Multiplier::IOperator { threshold, s };
    m.validate()?;
    let mut spec = transform_forward(f);
    apply_multiplier_spectral(&mut spec, &m)?;
    let w = transform_inverse(&spec);

    let g = grid.points();
    let d = 2 * g;
    let dtotal = d * d * d;
    let dx = grid.dx();

    // rho zero-padded into the doubled box, then transformed.
    let mut rho_hat = vec![Complex64::default(); dtotal];
    for (flat, v) in w.values().iter().enumerate() {
        let idx = grid.decode(flat);
        let padded = (idx[0] * d + idx[1]) * d + idx[2];
        rho_hat[padded] = Complex64::new(v.norm_sqr(), 0.0);
    }
    fft_nd(&mut rho_hat, 3, d, true);

    let kernels = kernel_transforms(g, grid.length(), dx);
    let p = momentum_density(&w);

    // Sum p . (K * rho) over the original box, one kernel component at a time.
    let scale = dx.powi(3) / dtotal as f64; // y-quadrature and FFT round trip
    let mut pairing = 0.0;
    let mut work = vec![Complex64::default(); dtotal];
    for (axis, khat) in kernels.iter().enumerate() {
        for ((wv, rh), kh) in work.iter_mut().zip(&rho_hat).zip(khat) {
            *wv = rh * kh;
        }
        fft_nd(&mut work, 3, d, false);
        let pj = &p[axis];
        for (flat, pv) in pj.iter().enumerate() {
            let idx = grid.decode(flat);
            let padded = (idx[0] * d + idx[1]) * d + idx[2];
            pairing += pv * work[padded].re * scale;
        }
    }
    Ok(-2.0 * pairing * dx.powi(3))
}
