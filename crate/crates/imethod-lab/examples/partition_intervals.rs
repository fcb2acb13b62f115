//! Greedy partition of a trajectory into intervals on which the L^4_t L^4_x
//! norm stays below a budget epsilon. Doubling the time horizon at fixed
//! epsilon should roughly double the interval count: the count is an
//! additive occupation measure of the flow, not a property of the endpoint.

use imethod_lab::checks::partition_by_norm;
use imethod_lab::dynamics::{evolve, StepConfig};
use imethod_lab::field::plane_wave;
use imethod_lab::Grid;
use num_complex::Complex64;

fn main() {
    let grid = Grid::new(1, 32, std::f64::consts::TAU).expect("grid");
    let u0 = plane_wave(grid, Complex64::new(0.9, 0.0), &[2]).expect("plane wave");

    let mut counts = Vec::new();
    for t_final in [1.0, 2.0] {
        let cfg = StepConfig::new(1e-2, t_final, 1);
        let traj = evolve(&u0, &cfg).expect("evolution");
        // A plane wave has constant L^4 norm, so the budget fills linearly.
        let per_unit_time = 0.9 * (2.0 * std::f64::consts::PI).powf(0.25);
        let epsilon = per_unit_time * 0.095f64.powf(0.25);
        let partition = partition_by_norm(&traj, 4.0, 4.0, epsilon).expect("partition");
        println!(
            "T = {t_final}: {} intervals, first = [{:.3}, {:.3}]",
            partition.count, partition.intervals[0].0, partition.intervals[0].1
        );
        counts.push(partition.count as f64);
    }
    let ratio = counts[1] / counts[0];
    println!("count ratio for doubled horizon: {ratio:.3} (expected near 2)");
    assert!((ratio - 2.0).abs() <= 0.2, "interval count is not additive");
}
