//! Dyadic frequency bookkeeping: the band projectors tile frequency space,
//! the coarsest low pass plus all shells rebuilds the field, and the
//! smoothing operator acts as the identity on low shells while damping high
//! ones by (N/scale)^(1-s).

use imethod_lab::multiplier::{apply_multiplier, sobolev_norm, Multiplier};
use imethod_lab::rough::{synthesize, RoughDataSpec};
use imethod_lab::Grid;

fn main() {
    let grid = Grid::new(2, 64, std::f64::consts::TAU).expect("grid");
    let f = synthesize(grid, &RoughDataSpec::new(0.5, 1.0, 7)).expect("rough field");
    println!("rough field: |f|_2 = {:.6}, |f|_H1 = {:.6}", f.l2_norm(), sobolev_norm(&f, 1.0, false).unwrap());

    let threshold = 8.0;
    let s = 0.5;
    let smoothing = Multiplier::IOperator { threshold, s };

    // Shell-by-shell mass, before and after smoothing.
    println!("{:>8} {:>12} {:>12} {:>10}", "scale", "|band f|_2", "|band If|_2", "damping");
    let mut scale = 1.0f64;
    let mut sum = apply_multiplier(&f, &Multiplier::LowPass { scale }).expect("low pass");
    while scale < 2.0 * grid.max_radial_freq() {
        scale *= 2.0;
        let band = apply_multiplier(&f, &Multiplier::Band { scale }).expect("band");
        let smoothed = apply_multiplier(&band, &smoothing).expect("smoothed band");
        let b = band.l2_norm();
        let sb = smoothed.l2_norm();
        println!("{scale:>8} {b:>12.6} {sb:>12.6} {:>10.4}", sb / b.max(1e-300));
        for (v, w) in sum.values_mut().iter_mut().zip(band.values()) {
            *v += w;
        }
    }

    // Telescoping: low pass + all bands is the identity.
    let mut worst = 0.0f64;
    for (rebuilt, original) in sum.values().iter().zip(f.values()) {
        worst = worst.max((rebuilt - original).norm());
    }
    println!("reconstruction sup error: {worst:.3e}");
    assert!(worst < 1e-10 * f.l2_norm(), "shells do not tile frequency space");

    // The smoothed H^1 norm is controlled by N^(1-s) times the H^s norm.
    let smoothed = apply_multiplier(&f, &smoothing).expect("smoothed");
    let lhs = sobolev_norm(&smoothed, 1.0, false).unwrap();
    let rhs = threshold.powf(1.0 - s) * sobolev_norm(&f, s, false).unwrap();
    println!("|If|_H1 = {lhs:.6} vs N^(1-s) |f|_Hs = {rhs:.6} (ratio {:.4})", lhs / rhs);
}
