//! Uniform periodic grid on the box [0, L)^n.
//!
//! Physical samples sit at x_j = j*dx with dx = L/G. The dual lattice carries
//! frequencies xi_k = (2*pi/L)*k for k in {-G/2, ..., G/2 - 1}, stored in FFT
//! order (index i maps to k = i for i < G/2 and k = i - G otherwise). The
//! Nyquist index i = G/2 is treated as the negative frequency -pi*G/L
//! everywhere, including in radial multipliers.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;
pub const MIN_POINTS: usize = 8;

/// Grid descriptor: dimension n, points per axis G, box side L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    points: usize,
    length: f64,
}

impl Grid {
    /// G must be a power of two with G >= 8, n in 1..=4, L > 0 and finite.
    pub fn new(dim: usize, points: usize, length: f64) -> Result<Self> {
        if dim < 1 || dim > MAX_DIM {
            return Err(Error::Grid(format!("dimension {dim} outside 1..=4")));
        }
        if points < MIN_POINTS || !points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "points per axis {points} must be a power of two >= {MIN_POINTS}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("box length {length} must be positive and finite")));
        }
        // Reject sizes whose total point count overflows practical memory.
        let total = (points as u128).pow(dim as u32);
        if total > (1u128 << 32) {
            return Err(Error::Grid(format!("grid with {total} points is too large")));
        }
        Ok(Grid { dim, points, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Total number of lattice points G^n.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency spacing 2*pi/L of the dual lattice.
    pub fn freq_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// Largest per-axis lattice frequency pi*G/L.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI * self.points as f64 / self.length
    }

    /// Largest radial frequency sqrt(n) * pi*G/L reachable at a lattice corner.
    pub fn max_radial_freq(&self) -> f64 {
        (self.dim as f64).sqrt() * self.nyquist()
    }

    /// Quadrature weight dx^n of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Box volume L^n.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Per-axis frequencies in FFT storage order (length G).
    pub fn axis_frequencies(&self) -> Vec<f64> {
        let g = self.points;
        let step = self.freq_step();
        (0..g)
            .map(|i| {
                let k = if i < g / 2 { i as i64 } else { i as i64 - g as i64 };
                k as f64 * step
            })
            .collect()
    }

    /// Signed integer lattice index along one axis for a storage index.
    pub fn axis_mode(&self, i: usize) -> i64 {
        debug_assert!(i < self.points);
        if i < self.points / 2 {
            i as i64
        } else {
            i as i64 - self.points as i64
        }
    }

    /// Row-major strides, last axis fastest: stride of axis a is G^(n-1-a).
    pub fn strides(&self) -> [usize; MAX_DIM] {
        let mut s = [0usize; MAX_DIM];
        let mut acc = 1usize;
        for a in (0..self.dim).rev() {
            s[a] = acc;
            acc *= self.points;
        }
        s
    }

    /// Decode a flat index into per-axis storage indices.
    pub fn decode(&self, flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0usize; MAX_DIM];
        let mut rem = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rem % self.points;
            rem /= self.points;
        }
        idx
    }

    /// |xi|^2 table over the flat lattice, FFT storage order.
    pub fn freq_sq_table(&self) -> Vec<f64> {
        let freqs = self.axis_frequencies();
        let sq: Vec<f64> = freqs.iter().map(|f| f * f).collect();
        let mut out = vec![0.0f64; self.len()];
        fill_separable_sum(&mut out, &sq, self.dim, self.points);
        out
    }

    /// Physical coordinates of per-axis samples: x_j = j*dx.
    pub fn axis_coords(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.points).map(|j| j as f64 * dx).collect()
    }
}

/// out[flat] = sum over axes of per[idx_axis], written without per-point div/mod.
fn fill_separable_sum(out: &mut [f64], per: &[f64], dim: usize, g: usize) {
    match dim {
        1 => out.copy_from_slice(per),
        2 => {
            let mut p = 0;
            for i0 in 0..g {
                let a = per[i0];
                for i1 in 0..g {
                    out[p] = a + per[i1];
                    p += 1;
                }
            }
        }
        3 => {
            let mut p = 0;
            for i0 in 0..g {
                let a = per[i0];
                for i1 in 0..g {
                    let b = a + per[i1];
                    for i2 in 0..g {
                        out[p] = b + per[i2];
                        p += 1;
                    }
                }
            }
        }
        4 => {
            let mut p = 0;
            for i0 in 0..g {
                let a = per[i0];
                for i1 in 0..g {
                    let b = a + per[i1];
                    for i2 in 0..g {
                        let c = b + per[i2];
                        for i3 in 0..g {
                            out[p] = c + per[i3];
                            p += 1;
                        }
                    }
                }
            }
        }
        _ => unreachable!("dimension checked at Grid::new"),
    }
}
