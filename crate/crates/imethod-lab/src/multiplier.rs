//! Radial Fourier multipliers: smoothed frequency cutoffs, the smoothing
//! operator I, fractional derivatives, and Sobolev norms.
//!
//! The cutoff profile phi is 1 on [0, 1/2], 0 on [1, inf), and blends with
//! h(2-2r) / (h(2-2r) + h(2r-1)) in between, where h(t) = exp(-1/t) for t > 0.
//! It is smooth, nonincreasing, and phi(3/4) = 1/2 by symmetry.
//!
//! The smoothing operator I with threshold N and regularity s has symbol
//! m(xi) = 1 for |xi| <= N and (N/|xi|)^(1-s) beyond, so that
//! |xi| m(xi) = N^(1-s) |xi|^s exactly on the outer branch.

use crate::error::{Error, Result};
use crate::field::{transform_forward, transform_inverse, Field, SpectralField};
use num_complex::Complex64;

/// Smooth transition h(t) = exp(-1/t) on t > 0, 0 otherwise.
fn smooth_h(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth radial cutoff profile; see module docs.
pub fn cutoff_profile(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        let a = smooth_h(2.0 - 2.0 * r);
        let b = smooth_h(2.0 * r - 1.0);
        a / (a + b)
    }
}

/// Radial symbol descriptor. All kinds act on |xi| with the Nyquist slot
/// counted as the negative frequency.
#[derive(Clone, Copy)]
pub enum Multiplier {
    /// 1 below the threshold, (threshold/|xi|)^(1-s) above it.
    IOperator { threshold: f64, s: f64 },
    /// phi(|xi| / scale): passes everything below scale/2, kills beyond scale.
    LowPass { scale: f64 },
    /// 1 - phi(|xi| / scale).
    HighPass { scale: f64 },
    /// phi(|xi| / scale) - phi(2 |xi| / scale): one smoothed dyadic shell.
    Band { scale: f64 },
    /// |xi|^order with value 0 at xi = 0; order must be nonnegative.
    FractionalGradient { order: f64 },
    /// (1 + |xi|^2)^(order/2).
    BracketGradient { order: f64 },
    /// Arbitrary radial symbol.
    Custom(fn(f64) -> f64),
}

impl std::fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplier::IOperator { threshold, s } => {
                write!(f, "IOperator {{ threshold: {threshold}, s: {s} }}")
            }
            Multiplier::LowPass { scale } => write!(f, "LowPass {{ scale: {scale} }}"),
            Multiplier::HighPass { scale } => write!(f, "HighPass {{ scale: {scale} }}"),
            Multiplier::Band { scale } => write!(f, "Band {{ scale: {scale} }}"),
            Multiplier::FractionalGradient { order } => {
                write!(f, "FractionalGradient {{ order: {order} }}")
            }
            Multiplier::BracketGradient { order } => {
                write!(f, "BracketGradient {{ order: {order} }}")
            }
            Multiplier::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Multiplier {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Multiplier(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            Multiplier::IOperator { threshold, s } => {
                positive("threshold", threshold)?;
                if !(s.is_finite() && s > 0.0 && s <= 1.0) {
                    return Err(Error::Multiplier(format!(
                        "regularity s must lie in (0, 1], got {s}"
                    )));
                }
                Ok(())
            }
            Multiplier::LowPass { scale }
            | Multiplier::HighPass { scale }
            | Multiplier::Band { scale } => positive("scale", scale),
            Multiplier::FractionalGradient { order } => {
                if !order.is_finite() {
                    return Err(Error::Multiplier(format!("order must be finite, got {order}")));
                }
                if order < 0.0 {
                    return Err(Error::Multiplier(format!(
                        "fractional gradient of order {order} is undefined at xi = 0"
                    )));
                }
                Ok(())
            }
            Multiplier::BracketGradient { order } => {
                if order.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Multiplier(format!("order must be finite, got {order}")))
                }
            }
            Multiplier::Custom(_) => Ok(()),
        }
    }

    /// Symbol value at radius r = |xi| >= 0.
    pub fn symbol(&self, r: f64) -> f64 {
        match *self {
            Multiplier::IOperator { threshold, s } => {
                if r <= threshold {
                    1.0
                } else {
                    (threshold / r).powf(1.0 - s)
                }
            }
            Multiplier::LowPass { scale } => cutoff_profile(r / scale),
            Multiplier::HighPass { scale } => 1.0 - cutoff_profile(r / scale),
            Multiplier::Band { scale } => {
                cutoff_profile(r / scale) - cutoff_profile(2.0 * r / scale)
            }
            Multiplier::FractionalGradient { order } => {
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(order)
                }
            }
            Multiplier::BracketGradient { order } => (1.0 + r * r).powf(order / 2.0),
            Multiplier::Custom(f) => f(r),
        }
    }
}

/// Multiply spectral coefficients by the symbol, in place.
pub fn apply_multiplier_spectral(s: &mut SpectralField, m: &Multiplier) -> Result<()> {
    m.validate()?;
    let table = s.grid().freq_sq_table();
    for (c, &r2) in s.coeffs_mut().iter_mut().zip(&table) {
        *c *= m.symbol(r2.sqrt());
    }
    Ok(())
}

/// Transform, multiply by the symbol, transform back.
pub fn apply_multiplier(f: &Field, m: &Multiplier) -> Result<Field> {
    let mut s = transform_forward(f);
    apply_multiplier_spectral(&mut s, m)?;
    Ok(transform_inverse(&s))
}

/// Sobolev norm of regularity s in [-2, 2].
///
/// homogeneous = true:  (L^-n sum |xi|^(2s) |uhat|^2)^(1/2), zero mode dropped;
/// homogeneous = false: (L^-n sum (1 + |xi|^2)^s |uhat|^2)^(1/2).
pub fn sobolev_norm(f: &Field, s: f64, homogeneous: bool) -> Result<f64> {
    let spec = transform_forward(f);
    sobolev_norm_spectral(&spec, s, homogeneous)
}

/// Same as `sobolev_norm`, starting from coefficients.
pub fn sobolev_norm_spectral(spec: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    if !(s.is_finite() && (-2.0..=2.0).contains(&s)) {
        return Err(Error::Multiplier(format!("Sobolev order {s} outside [-2, 2]")));
    }
    let table = spec.grid().freq_sq_table();
    let mut acc = 0.0;
    if homogeneous {
        for (c, &r2) in spec.coeffs().iter().zip(&table) {
            if r2 > 0.0 {
                acc += r2.powf(s) * c.norm_sqr();
            }
        }
    } else {
        for (c, &r2) in spec.coeffs().iter().zip(&table) {
            acc += (1.0 + r2).powf(s) * c.norm_sqr();
        }
    }
    Ok((acc / spec.grid().volume()).sqrt())
}

/// Spectral partial derivatives: component a is the inverse transform of
/// i * xi_a * uhat.
pub fn gradient(f: &Field) -> Vec<Field> {
    let spec = transform_forward(f);
    gradient_spectral(&spec)
}

/// Gradient components from coefficients; see `gradient`.
///
/// The unpaired Nyquist index gets weight zero: its interpolant is
/// cos(pi G x / L), whose derivative vanishes at every node, and the
/// one-sided weight -i xi would give real fields a complex derivative.
pub fn gradient_spectral(spec: &SpectralField) -> Vec<Field> {
    let grid = spec.grid();
    let freqs = grid.axis_frequencies();
    let strides = grid.strides();
    let g = grid.points();
    let mut out = Vec::with_capacity(grid.dim());
    for a in 0..grid.dim() {
        let stride = strides[a];
        let mut coeffs = spec.coeffs().to_vec();
        for (flat, c) in coeffs.iter_mut().enumerate() {
            let ia = (flat / stride) % g;
            let xi = if ia == g / 2 { 0.0 } else { freqs[ia] };
            *c = Complex64::new(-c.im * xi, c.re * xi); // multiply by i*xi
        }
        let comp = SpectralField::new(grid, coeffs).expect("same grid");
        out.push(transform_inverse(&comp));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        Field::new(grid, values).unwrap()
    }

    #[test]
    fn cutoff_profile_shape() {
        assert_eq!(cutoff_profile(0.0), 1.0);
        assert_eq!(cutoff_profile(0.5), 1.0);
        assert_eq!(cutoff_profile(1.0), 0.0);
        assert_eq!(cutoff_profile(2.0), 0.0);
        assert!((cutoff_profile(0.75) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = cutoff_profile(i as f64 / 1000.0 * 1.5);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-15, "profile rose at sample {i}");
            prev = v;
        }
    }

    #[test]
    fn smoothing_symbol_branches() {
        let m = Multiplier::IOperator { threshold: 4.0, s: 0.6 };
        assert_eq!(m.symbol(0.0), 1.0);
        assert_eq!(m.symbol(4.0), 1.0);
        let r = 9.0;
        assert!((m.symbol(r) - (4.0f64 / 9.0).powf(0.4)).abs() < 1e-15);
        // s = 1 is the identity.
        let id = Multiplier::IOperator { threshold: 4.0, s: 1.0 };
        assert_eq!(id.symbol(123.0), 1.0);
    }

    #[test]
    fn smoothing_above_nyquist_is_identity_on_fields() {
        let grid = Grid::new(2, 16, 2.0 * std::f64::consts::PI).unwrap();
        let f = random_field(grid, 3);
        let n_big = grid.max_radial_freq() + 1.0;
        let out = apply_multiplier(&f, &Multiplier::IOperator { threshold: n_big, s: 0.6 }).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in out.values().iter().zip(f.values()) {
            err = err.max((a - b).norm());
        }
        assert!(err <= 1e-12, "identity deviation {err}");
    }

    #[test]
    fn low_plus_high_reconstructs() {
        let grid = Grid::new(3, 8, 4.0).unwrap();
        let f = random_field(grid, 11);
        let lo = apply_multiplier(&f, &Multiplier::LowPass { scale: 3.0 }).unwrap();
        let hi = apply_multiplier(&f, &Multiplier::HighPass { scale: 3.0 }).unwrap();
        let mut err: f64 = 0.0;
        for ((a, b), c) in lo.values().iter().zip(hi.values()).zip(f.values()) {
            err = err.max((a + b - c).norm());
        }
        assert!(err <= 1e-12 * f.l2_norm(), "reconstruction error {err}");
    }

    #[test]
    fn band_telescoping_matches_low_pass_difference() {
        let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI).unwrap();
        let f = random_field(grid, 17);
        let band = apply_multiplier(&f, &Multiplier::Band { scale: 8.0 }).unwrap();
        let lo8 = apply_multiplier(&f, &Multiplier::LowPass { scale: 8.0 }).unwrap();
        let lo4 = apply_multiplier(&f, &Multiplier::LowPass { scale: 4.0 }).unwrap();
        let mut err: f64 = 0.0;
        for ((a, b), c) in band.values().iter().zip(lo8.values()).zip(lo4.values()) {
            err = err.max((a - (b - c)).norm());
        }
        assert!(err <= 1e-12, "band vs low-pass difference {err}");
    }

    #[test]
    fn projector_symbols_stay_in_unit_interval() {
        let kinds = [
            Multiplier::IOperator { threshold: 2.0, s: 0.7 },
            Multiplier::LowPass { scale: 5.0 },
            Multiplier::HighPass { scale: 5.0 },
            Multiplier::Band { scale: 5.0 },
        ];
        for m in kinds {
            for i in 0..2000 {
                let r = i as f64 * 0.01;
                let v = m.symbol(r);
                assert!((0.0..=1.0).contains(&v), "{m:?} at r={r} gave {v}");
            }
        }
    }

    #[test]
    fn fractional_gradient_validation_and_action() {
        assert!(Multiplier::FractionalGradient { order: -0.5 }.validate().is_err());
        let grid = Grid::new(2, 8, 2.0 * std::f64::consts::PI).unwrap();
        let f = crate::field::plane_wave(grid, Complex64::new(1.0, 0.0), &[2, -1]).unwrap();
        let out = apply_multiplier(&f, &Multiplier::FractionalGradient { order: 2.0 }).unwrap();
        let want = 5.0; // |xi|^2 = 4 + 1
        for (a, b) in out.values().iter().zip(f.values()) {
            assert!((a - b * want).norm() < 1e-10);
        }
        // Zero mode is annihilated even at order 0.
        let ones = Field::new(grid, vec![Complex64::new(1.0, 0.0); grid.len()]).unwrap();
        let z = apply_multiplier(&ones, &Multiplier::FractionalGradient { order: 0.0 }).unwrap();
        assert!(z.l2_norm() < 1e-12);
    }

    #[test]
    fn bracket_gradient_on_plane_wave() {
        let grid = Grid::new(2, 8, 2.0 * std::f64::consts::PI).unwrap();
        let f = crate::field::plane_wave(grid, Complex64::new(0.5, 0.5), &[1, 2]).unwrap();
        let out = apply_multiplier(&f, &Multiplier::BracketGradient { order: -1.0 }).unwrap();
        let want = (1.0f64 + 5.0).powf(-0.5);
        for (a, b) in out.values().iter().zip(f.values()) {
            assert!((a - b * want).norm() < 1e-10);
        }
    }

    #[test]
    fn sobolev_norm_special_cases() {
        let grid = Grid::new(2, 16, 2.0 * std::f64::consts::PI).unwrap();
        let f = random_field(grid, 23);
        // Order zero, inhomogeneous: plain L2 norm.
        let h0 = sobolev_norm(&f, 0.0, false).unwrap();
        assert!((h0 - f.l2_norm()).abs() <= 1e-12 * h0);
        // Constant fields carry no homogeneous norm.
        let ones = Field::new(grid, vec![Complex64::new(2.0, 1.0); grid.len()]).unwrap();
        assert!(sobolev_norm(&ones, 1.0, true).unwrap() < 1e-12);
        // Plane wave of mode k: homogeneous norm |xi_k|^s * l2.
        let pw = crate::field::plane_wave(grid, Complex64::new(1.0, 0.0), &[3, 4]).unwrap();
        let s = 0.5;
        let got = sobolev_norm(&pw, s, true).unwrap();
        let want = 5.0f64.powf(s) * pw.l2_norm();
        assert!((got - want).abs() <= 1e-10 * want);
        // Out-of-range order is rejected.
        assert!(sobolev_norm(&f, 2.5, true).is_err());
        assert!(sobolev_norm(&f, -2.5, false).is_err());
    }

    #[test]
    fn smoothing_h1_bound_on_random_fields() {
        // |I u|_{H^1} <= N^(1-s) * (1 + N^-2)^(1/2) * |u|_{H^s} holds on the
        // lattice because (1 + r^2) m(r)^2 <= N^(2-2s) (1 + N^-2) (1 + r^2)^s
        // pointwise on both branches of m.
        let grid = Grid::new(2, 16, 4.0).unwrap();
        let nthr = 3.0;
        let s = 0.6;
        let m = Multiplier::IOperator { threshold: nthr, s };
        let cbound = nthr.powf(1.0 - s) * (1.0 + nthr.powi(-2)).sqrt();
        for seed in 0..100 {
            let f = random_field(grid, 1000 + seed);
            let lhs = sobolev_norm(&apply_multiplier(&f, &m).unwrap(), 1.0, false).unwrap();
            let rhs = cbound * sobolev_norm(&f, s, false).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-12), "seed {seed}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn outer_branch_identity_is_exact() {
        // For spectrum entirely above max(4N, M), |xi| m(xi) = N^(1-s)|xi|^s
        // makes the derivative of the smoothed field match the fractional
        // derivative exactly.
        let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI).unwrap();
        let nthr = 2.0;
        let s = 0.55;
        // Mode (9, 12): radius 15 > 4N = 8.
        let f = crate::field::plane_wave(grid, Complex64::new(0.7, 0.2), &[9, 12]).unwrap();
        let smoothed = apply_multiplier(&f, &Multiplier::IOperator { threshold: nthr, s }).unwrap();
        let lhs = sobolev_norm(&f, s, true).unwrap();
        let rhs = nthr.powf(-(1.0 - s)) * sobolev_norm(&smoothed, 1.0, true).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * lhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn gradient_of_plane_wave() {
        let grid = Grid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let f = crate::field::plane_wave(grid, Complex64::new(1.0, 0.0), &[1, -2, 3]).unwrap();
        let grads = gradient(&f);
        let want = [1.0, -2.0, 3.0];
        for (a, comp) in grads.iter().enumerate() {
            for (g, u) in comp.values().iter().zip(f.values()) {
                let expect = Complex64::new(0.0, want[a]) * u;
                assert!((g - expect).norm() < 1e-10);
            }
        }
    }
}
