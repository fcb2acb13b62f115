//! The pair action M = -2 int p(x) . (K * rho)(x) dx, K(r) = r/|r|, weighs
//! how much momentum points along the separation vector between every pair
//! of points. Two bumps flying apart give M < 0, two bumps approaching give
//! M > 0, and |M| is capped by 2 sqrt(2) |w|^3 |grad w| in every state.

use imethod_lab::field::gaussian;
use imethod_lab::functionals::mass;
use imethod_lab::morawetz::morawetz_action;
use imethod_lab::multiplier::{apply_multiplier, gradient, Multiplier};
use imethod_lab::{Field, Grid};
use num_complex::Complex64;

/// Two gaussian bumps at 0.3 L and 0.7 L along the first axis, each riding a
/// plane-wave phase ramp of the given sign, so they move apart or together.
fn bump_pair(grid: Grid, outgoing: bool) -> Field {
    let l = grid.length();
    let sign = if outgoing { 1.0 } else { -1.0 };
    let left = gaussian(grid, 1.0, 0.6, Some(&[0.3 * l, 0.5 * l, 0.5 * l])).expect("bump");
    let right = gaussian(grid, 1.0, 0.6, Some(&[0.7 * l, 0.5 * l, 0.5 * l])).expect("bump");
    let coords = grid.axis_coords();
    let mut out = Field::zeros(grid);
    for (flat, v) in out.values_mut().iter_mut().enumerate() {
        let x = coords[grid.decode(flat)[0]];
        let ramp = |k: f64| Complex64::from_polar(1.0, k * x);
        *v = left.values()[flat] * ramp(-sign) + right.values()[flat] * ramp(sign);
    }
    // Keep the spectrum off the Nyquist plane so conjugation symmetry holds.
    apply_multiplier(&out, &Multiplier::LowPass { scale: 0.9 * grid.nyquist() }).expect("band limit")
}

fn main() {
    let grid = Grid::new(3, 16, std::f64::consts::TAU).expect("grid");
    let threshold = grid.max_radial_freq() + 1.0; // smoothing inert: w = u
    let s = 0.6;

    for outgoing in [true, false] {
        let w = bump_pair(grid, outgoing);
        let action = morawetz_action(&w, threshold, s).expect("action");
        let grad_sq: f64 = gradient(&w).iter().map(|g| g.l2_norm().powi(2)).sum();
        let cap = 2.0 * 2.0f64.sqrt() * mass(&w).powf(1.5) * grad_sq.sqrt();
        let label = if outgoing { "outgoing" } else { "incoming" };
        println!("{label}: M = {action:+.6e}   cap = {cap:.6e}");
        assert!(action.abs() <= cap * (1.0 + 1e-12), "cap violated");
        assert_eq!(action < 0.0, outgoing, "sign does not track relative motion");
    }

    let silence = Field::zeros(grid);
    let zero = morawetz_action(&silence, threshold, s).expect("action");
    println!("zero field: M = {zero:?}");
    assert_eq!(zero, 0.0);
}
