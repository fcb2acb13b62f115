//! How much dilation does rough data need before its smoothed energy is
//! small? For each threshold N, the experiment doubles lambda until
//! E(I_N u_lam) drops under the cap. The smoothing gains a factor N^(1-s)
//! of differentiation, so the required lambda grows like N^((1-s)/s); the
//! measured staircase is quantized to powers of two but its log-log slope
//! should sit near that exponent.

use imethod_lab::checks::rescale_experiment;
use imethod_lab::rough::{synthesize, RoughDataSpec};
use imethod_lab::Grid;

fn main() {
    let grid = Grid::new(1, 256, std::f64::consts::TAU).expect("grid");
    let u0 = synthesize(grid, &RoughDataSpec::new(0.5, 1.0, 11)).expect("rough data");

    let s = 0.5;
    let report = rescale_experiment(&u0, s, &[2.0, 4.0, 8.0], 0.5, 1 << 12).expect("experiment");

    println!("{:>6} {:>8} {:>16}", "N", "lambda", "E(I u_lam)");
    for row in &report.rows {
        match (row.lambda, row.modified_energy) {
            (Some(l), Some(e)) => println!("{:>6} {l:>8} {e:>16.6e}", row.threshold),
            _ => println!("{:>6} {:>8} {:>16}", row.threshold, "-", "cap never met"),
        }
    }
    println!(
        "measured exponent {:?} vs (1-s)/s = {:.3}",
        report.slope,
        report.expected_slope
    );
    println!("{}", report.to_check_report(0.3).summary_line());
}
