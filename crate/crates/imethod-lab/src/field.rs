//! Complex fields on a grid and their spectral counterparts.
//!
//! Transform conventions (continuum-approximating):
//!   forward:  uhat(xi_k) = dx^n * sum_x u(x) e^{-i xi_k . x}
//!   inverse:  u(x) = L^{-n} * sum_k uhat(xi_k) e^{i xi_k . x}
//! so a forward/inverse round trip is the identity, and the discrete Parseval
//! identity reads dx^n sum |u|^2 = L^{-n} sum |uhat|^2.

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::grid::Grid;
use num_complex::Complex64;

/// Physical-space samples, row-major, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Fourier coefficients on the dual lattice, FFT storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "value buffer has {} entries, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field { grid, values: vec![Complex64::default(); grid.len()] }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Discrete L2 norm (dx^n sum |u|^2)^(1/2).
    pub fn l2_norm(&self) -> f64 {
        let mut acc = 0.0;
        for v in &self.values {
            acc += v.norm_sqr();
        }
        (acc * self.grid.cell_volume()).sqrt()
    }

    /// Index of the first NaN or infinite sample, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    }
}

impl SpectralField {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Grid(format!(
                "coefficient buffer has {} entries, grid needs {}",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        SpectralField { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Discrete L2 norm (L^-n sum |uhat|^2)^(1/2); equals the physical-side
    /// norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = 0.0;
        for c in &self.coeffs {
            acc += c.norm_sqr();
        }
        (acc / self.grid.volume()).sqrt()
    }
}

/// Forward transform with quadrature weight dx^n.
pub fn transform_forward(f: &Field) -> SpectralField {
    let grid = f.grid;
    let mut coeffs = f.values.clone();
    fft_nd(&mut coeffs, grid.dim(), grid.points(), true);
    let w = grid.cell_volume();
    for c in &mut coeffs {
        *c *= w;
    }
    SpectralField { grid, coeffs }
}

/// Inverse transform with weight L^-n.
pub fn transform_inverse(s: &SpectralField) -> Field {
    let grid = s.grid;
    let mut values = s.coeffs.clone();
    fft_nd(&mut values, grid.dim(), grid.points(), false);
    let w = 1.0 / grid.volume();
    for v in &mut values {
        *v *= w;
    }
    Field { grid, values }
}

/// Real part of the L2 pairing dx^n sum conj(a) * b.
pub fn re_inner(a: &Field, b: &Field) -> f64 {
    debug_assert_eq!(a.grid, b.grid);
    let mut acc = 0.0;
    for (x, y) in a.values.iter().zip(&b.values) {
        acc += x.re * y.re + x.im * y.im;
    }
    acc * a.grid.cell_volume()
}

/// Plane wave c * e^{i xi_k . x} for an integer lattice mode k (one entry per
/// axis, each in [-G/2, G/2)).
pub fn plane_wave(grid: Grid, amplitude: Complex64, mode: &[i64]) -> Result<Field> {
    if mode.len() != grid.dim() {
        return Err(Error::Grid(format!(
            "mode vector has {} entries, grid dimension is {}",
            mode.len(),
            grid.dim()
        )));
    }
    let g = grid.points() as i64;
    for &k in mode {
        if k < -g / 2 || k >= g / 2 {
            return Err(Error::Grid(format!(
                "mode component {k} outside the lattice range [{}, {})",
                -g / 2,
                g / 2
            )));
        }
    }
    // Phase per axis sample: 2*pi*k*j/G, tabulated once per axis.
    let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(grid.dim());
    for &k in mode {
        let table: Vec<Complex64> = (0..grid.points())
            .map(|j| {
                let ang = 2.0 * std::f64::consts::PI * k as f64 * j as f64 / grid.points() as f64;
                Complex64::new(ang.cos(), ang.sin())
            })
            .collect();
        tables.push(table);
    }
    let mut values = vec![amplitude; grid.len()];
    for (flat, v) in values.iter_mut().enumerate() {
        let idx = grid.decode(flat);
        for (a, table) in tables.iter().enumerate() {
            *v *= table[idx[a]];
        }
    }
    Ok(Field { grid, values })
}

/// Gaussian bump A * exp(-|x - c|^2 / w^2) with periodic minimal-image
/// displacement; `center` defaults to the box center.
pub fn gaussian(grid: Grid, amplitude: f64, width: f64, center: Option<&[f64]>) -> Result<Field> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::Grid(format!("gaussian width {width} must be positive")));
    }
    let l = grid.length();
    let default_center = vec![0.5 * l; grid.dim()];
    let c = match center {
        Some(c) => {
            if c.len() != grid.dim() {
                return Err(Error::Grid(format!(
                    "center has {} entries, grid dimension is {}",
                    c.len(),
                    grid.dim()
                )));
            }
            c.to_vec()
        }
        None => default_center,
    };
    let coords = grid.axis_coords();
    let inv_w2 = 1.0 / (width * width);
    let mut values = vec![Complex64::default(); grid.len()];
    for (flat, v) in values.iter_mut().enumerate() {
        let idx = grid.decode(flat);
        let mut r2 = 0.0;
        for a in 0..grid.dim() {
            let mut d = coords[idx[a]] - c[a];
            d -= l * (d / l).round();
            r2 += d * d;
        }
        *v = Complex64::new(amplitude * (-r2 * inv_w2).exp(), 0.0);
    }
    Ok(Field { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_field(grid: Grid) -> Field {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.len() {
            let t = j as f64;
            values.push(Complex64::new((0.37 * t).sin(), (0.11 * t).cos() * 0.5));
        }
        Field::new(grid, values).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        for (dim, g) in [(1usize, 64usize), (2, 16), (3, 8)] {
            let grid = Grid::new(dim, g, 5.0).unwrap();
            let f = sample_field(grid);
            let back = transform_inverse(&transform_forward(&f));
            let mut err = 0.0;
            for (a, b) in back.values().iter().zip(f.values()) {
                err += (a - b).norm_sqr();
            }
            let rel = (err * grid.cell_volume()).sqrt() / f.l2_norm();
            assert!(rel <= 1e-12, "dim {dim}: round trip error {rel}");
        }
    }

    #[test]
    fn parseval_holds_both_ways() {
        let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI).unwrap();
        let f = sample_field(grid);
        let s = transform_forward(&f);
        let a = f.l2_norm();
        let b = s.l2_norm();
        assert!((a - b).abs() <= 1e-12 * a);
        // And again from a spectral starting point.
        let f2 = transform_inverse(&s);
        assert!((f2.l2_norm() - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn plane_wave_transforms_to_single_mode() {
        let grid = Grid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let amp = Complex64::new(0.8, -0.3);
        let f = plane_wave(grid, amp, &[1, -2, 3]).unwrap();
        let s = transform_forward(&f);
        let axis: Vec<i64> = (0..grid.points()).map(|i| grid.axis_mode(i)).collect();
        let vol = grid.volume();
        for (flat, c) in s.coeffs().iter().enumerate() {
            let idx = grid.decode(flat);
            let mode = [axis[idx[0]], axis[idx[1]], axis[idx[2]]];
            if mode == [1, -2, 3] {
                assert!((c - amp * vol).norm() <= 1e-10 * vol);
            } else {
                assert!(c.norm() <= 1e-10 * vol);
            }
        }
    }

    #[test]
    fn off_lattice_mode_rejected() {
        let grid = Grid::new(2, 8, 1.0).unwrap();
        assert!(plane_wave(grid, Complex64::new(1.0, 0.0), &[4, 0]).is_err());
        assert!(plane_wave(grid, Complex64::new(1.0, 0.0), &[-5, 0]).is_err());
        assert!(plane_wave(grid, Complex64::new(1.0, 0.0), &[0]).is_err());
        assert!(plane_wave(grid, Complex64::new(1.0, 0.0), &[-4, 3]).is_ok());
    }

    #[test]
    fn gaussian_mass_matches_closed_form() {
        // dx^n sum |e^{-|x|^2}|^2 ~ (pi/2)^(3/2) on a box that contains the bump.
        let grid = Grid::new(3, 32, 2.0 * std::f64::consts::PI).unwrap();
        let f = gaussian(grid, 1.0, 1.0, None).unwrap();
        let mass = f.l2_norm().powi(2);
        let want = (std::f64::consts::PI / 2.0).powf(1.5);
        assert!((mass - want).abs() <= 1e-6 * want, "mass {mass} vs {want}");
    }

    #[test]
    fn non_finite_detection() {
        let grid = Grid::new(1, 8, 1.0).unwrap();
        let mut f = Field::zeros(grid);
        assert!(f.first_non_finite().is_none());
        f.values_mut()[5] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(f.first_non_finite(), Some(5));
    }
}
