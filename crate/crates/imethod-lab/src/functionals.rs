//! Conserved and monitored quantities: mass, energy, the modified energy of
//! the smoothed field, Lebesgue and mixed spacetime norms, the momentum
//! density, and the production rate of the modified energy.
//!
//! All spatial integrals use the quadrature dx^n * sum; spectral sums carry
//! the dual weight L^-n. Time integration of spacetime norms is trapezoidal
//! on the snapshot ladder.

use crate::dynamics::{nonlinearity, Trajectory};
use crate::error::{Error, Result};
use crate::field::{re_inner, transform_forward, transform_inverse, Field, SpectralField};
use crate::multiplier::{gradient_spectral, Multiplier};
use num_complex::Complex64;
use num_rational::Rational64;

/// Discrete mass dx^n sum |u|^2.
pub fn mass(f: &Field) -> f64 {
    let mut acc = 0.0;
    for v in f.values() {
        acc += v.norm_sqr();
    }
    acc * f.grid().cell_volume()
}

/// Kinetic and potential parts of the energy
///   E(u) = 1/2 int |grad u|^2 + n/(2n+4) int |u|^(2 + 4/n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub kinetic: f64,
    pub potential: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential
    }
}

fn kinetic_spectral(spec: &SpectralField) -> f64 {
    let table = spec.grid().freq_sq_table();
    let mut acc = 0.0;
    for (c, &r2) in spec.coeffs().iter().zip(&table) {
        acc += r2 * c.norm_sqr();
    }
    0.5 * acc / spec.grid().volume()
}

fn potential_physical(f: &Field) -> f64 {
    let n = f.grid().dim() as f64;
    let coef = n / (2.0 * n + 4.0);
    let e = 1.0 + 2.0 / n; // |u|^(2+4/n) = (|u|^2)^(1+2/n)
    let mut acc = 0.0;
    for v in f.values() {
        acc += v.norm_sqr().powf(e);
    }
    coef * acc * f.grid().cell_volume()
}

/// Energy of the field; the gradient term is evaluated spectrally.
pub fn energy(f: &Field) -> EnergyParts {
    EnergyParts {
        kinetic: kinetic_spectral(&transform_forward(f)),
        potential: potential_physical(f),
    }
}

/// Energy of the smoothed field I u, where I has the given threshold and
/// regularity s.
pub fn modified_energy(f: &Field, threshold: f64, s: f64) -> Result<EnergyParts> {
    let m = Multiplier::IOperator { threshold, s };
    m.validate()?;
    let mut spec = transform_forward(f);
    crate::multiplier::apply_multiplier_spectral(&mut spec, &m)?;
    let kinetic = kinetic_spectral(&spec);
    let smoothed = transform_inverse(&spec);
    Ok(EnergyParts { kinetic, potential: potential_physical(&smoothed) })
}

/// Lebesgue norm (dx^n sum |u|^q)^(1/q); q = f64::INFINITY gives max |u|.
pub fn lebesgue_norm(f: &Field, q: f64) -> Result<f64> {
    if q == f64::INFINITY {
        let mut sup: f64 = 0.0;
        for v in f.values() {
            sup = sup.max(v.norm_sqr());
        }
        return Ok(sup.sqrt());
    }
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::Functional(format!("Lebesgue exponent {q} must be >= 1 or infinity")));
    }
    let e = q / 2.0;
    let mut acc = 0.0;
    for v in f.values() {
        acc += v.norm_sqr().powf(e);
    }
    Ok((acc * f.grid().cell_volume()).powf(1.0 / q))
}

/// Mixed L^p_t L^q_x norm over a snapshot interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeNorm {
    pub p: f64,
    pub q: f64,
    pub interval: (f64, f64),
    pub value: f64,
    /// Time quadrature rule; always the trapezoid rule on snapshots.
    pub quadrature: &'static str,
}

/// Trapezoid integral of samples g over nodes t.
fn trapezoid(t: &[f64], g: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..t.len() {
        acc += 0.5 * (g[i] + g[i - 1]) * (t[i] - t[i - 1]);
    }
    acc
}

/// Evaluate the L^p_t L^q_x norm of a trajectory over [t0, t1] using only the
/// snapshots inside the interval. p = infinity takes the max over snapshots;
/// finite p integrates the p-th power of the spatial norm by trapezoid.
pub fn spacetime_norm(traj: &Trajectory, p: f64, q: f64, interval: (f64, f64)) -> Result<SpacetimeNorm> {
    if p != f64::INFINITY && !(p.is_finite() && p >= 1.0) {
        return Err(Error::Functional(format!("time exponent {p} must be >= 1 or infinity")));
    }
    let (t0, t1) = interval;
    if !(t0.is_finite() && t1.is_finite() && t0 <= t1) {
        return Err(Error::Interval(t0, t1));
    }
    let times = traj.times();
    let span = times.last().unwrap() - times[0];
    let tol = 1e-9 * span.max(1.0);
    if t0 < times[0] - tol || t1 > times.last().unwrap() + tol {
        return Err(Error::Interval(t0, t1));
    }
    let mut ts = Vec::new();
    let mut gs = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        if t >= t0 - tol && t <= t1 + tol {
            ts.push(t);
            gs.push(lebesgue_norm(&traj.states()[i], q)?);
        }
    }
    if ts.is_empty() {
        return Err(Error::Interval(t0, t1));
    }
    let value = if p == f64::INFINITY {
        gs.iter().cloned().fold(0.0f64, f64::max)
    } else {
        let powered: Vec<f64> = gs.iter().map(|g| g.powf(p)).collect();
        trapezoid(&ts, &powered).powf(1.0 / p)
    };
    Ok(SpacetimeNorm { p, q, interval, value, quadrature: "trapezoid" })
}

/// A Strichartz exponent pair (p, q); p = None encodes p = infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub p: Option<Rational64>,
    pub q: Rational64,
}

impl AdmissiblePair {
    pub fn new_finite(p: (i64, i64), q: (i64, i64)) -> Self {
        AdmissiblePair { p: Some(Rational64::new(p.0, p.1)), q: Rational64::new(q.0, q.1) }
    }

    pub fn new_sup(q: (i64, i64)) -> Self {
        AdmissiblePair { p: None, q: Rational64::new(q.0, q.1) }
    }

    /// Exact rational admissibility: 2/p = n (1/2 - 1/q) with p >= 2.
    pub fn satisfies_scaling(&self, n: usize) -> bool {
        let n = Rational64::from_integer(n as i64);
        let half = Rational64::new(1, 2);
        let rhs = n * (half - self.q.recip());
        match self.p {
            None => rhs == Rational64::from_integer(0),
            Some(p) => p >= Rational64::from_integer(2) && Rational64::from_integer(2) / p == rhs,
        }
    }

    pub fn p_f64(&self) -> f64 {
        match self.p {
            None => f64::INFINITY,
            Some(p) => *p.numer() as f64 / *p.denom() as f64,
        }
    }

    pub fn q_f64(&self) -> f64 {
        *self.q.numer() as f64 / *self.q.denom() as f64
    }
}

/// The declared admissible pairs for n = 3 or 4:
/// (inf, 2), (2, 2n/(n-2)), and (4(n-1)/n, 2(n-1)/(n-2)), which for n = 3 is
/// the pair (8/3, 4).
pub fn admissible_pairs(n: usize) -> Result<Vec<AdmissiblePair>> {
    if n != 3 && n != 4 {
        return Err(Error::Functional(format!("admissible pair table covers n = 3, 4; got {n}")));
    }
    let m = n as i64;
    let pairs = vec![
        AdmissiblePair::new_sup((2, 1)),
        AdmissiblePair::new_finite((2, 1), (2 * m, m - 2)),
        AdmissiblePair::new_finite((4 * (m - 1), m), (2 * (m - 1), m - 2)),
    ];
    debug_assert!(pairs.iter().all(|pr| pr.satisfies_scaling(n)));
    Ok(pairs)
}

/// Momentum density p_j = Im(conj(u) d_j u), one real component per axis,
/// with spectral derivatives.
pub fn momentum_density(f: &Field) -> Vec<Vec<f64>> {
    let spec = transform_forward(f);
    let grads = gradient_spectral(&spec);
    grads
        .iter()
        .map(|comp| {
            f.values()
                .iter()
                .zip(comp.values())
                .map(|(u, g)| u.re * g.im - u.im * g.re) // Im(conj(u) g)
                .collect()
        })
        .collect()
}

/// Instantaneous production rate of the modified energy E(I u):
///   rate = Re int conj(d_t I u) ( |I u|^(4/n) I u - I(|u|^(4/n) u) ) dx
/// with d_t I u = i (Lap I u - I(|u|^(4/n) u)) read off from the equation.
/// The rate vanishes identically when I is the identity on the lattice, and
/// equals d/dt E(I u(t)) along exact solutions.
pub fn increment_rate(f: &Field, threshold: f64, s: f64) -> Result<f64> {
    let m = Multiplier::IOperator { threshold, s };
    m.validate()?;
    let grid = f.grid();
    let spec = transform_forward(f);
    let table = grid.freq_sq_table();

    // I uhat and Lap I uhat.
    let mut smoothed = spec.clone();
    crate::multiplier::apply_multiplier_spectral(&mut smoothed, &m)?;
    let mut lap = smoothed.clone();
    for (c, &r2) in lap.coeffs_mut().iter_mut().zip(&table) {
        *c *= -r2;
    }
    let smoothed_phys = transform_inverse(&smoothed);
    let lap_phys = transform_inverse(&lap);

    // I applied to the nonlinearity of u.
    let mut nl_spec = transform_forward(&nonlinearity(f));
    crate::multiplier::apply_multiplier_spectral(&mut nl_spec, &m)?;
    let smoothed_nl = transform_inverse(&nl_spec);

    // d_t I u = i (Lap I u - I nl(u)).
    let mut dt_vals = Vec::with_capacity(grid.len());
    for (a, b) in lap_phys.values().iter().zip(smoothed_nl.values()) {
        let z = a - b;
        dt_vals.push(Complex64::new(-z.im, z.re));
    }
    let dt_field = Field::new(grid, dt_vals)?;

    // Commutator gap nl(I u) - I nl(u).
    let nl_of_smoothed = nonlinearity(&smoothed_phys);
    let mut gap_vals = Vec::with_capacity(grid.len());
    for (a, b) in nl_of_smoothed.values().iter().zip(smoothed_nl.values()) {
        gap_vals.push(a - b);
    }
    let gap = Field::new(grid, gap_vals)?;

    Ok(re_inner(&dt_field, &gap))
}
