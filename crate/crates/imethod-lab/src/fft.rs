//! In-place n-dimensional FFT over flat row-major arrays (last axis fastest).
//!
//! Both directions are unnormalized, matching the usual DFT pair; callers
//! apply the quadrature scalings. Plans are cached per thread and per length,
//! so repeated transforms on the same grid reuse twiddle tables.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, forward))
            .or_insert_with(|| {
                if forward {
                    planner.plan_fft_forward(len)
                } else {
                    planner.plan_fft_inverse(len)
                }
            })
            .clone()
    })
}

/// Transform `data` (shape [g; dim], row-major) along every axis, in place.
/// `forward` uses the e^{-i...} kernel; the inverse kernel is its conjugate.
pub fn fft_nd(data: &mut [Complex64], dim: usize, g: usize, forward: bool) {
    debug_assert_eq!(data.len(), g.pow(dim as u32));
    let fft = plan(g, forward);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let total = data.len();

    // Last axis: contiguous lines.
    for chunk in data.chunks_exact_mut(g) {
        fft.process_with_scratch(chunk, &mut scratch);
    }

    // Remaining axes: gather each strided line into a buffer, transform, scatter.
    let mut line = vec![Complex64::default(); g];
    let mut stride = g;
    for _axis in 1..dim {
        let block = stride * g;
        for base_block in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = base_block + offset;
                for t in 0..g {
                    line[t] = data[base + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for t in 0..g {
                    data[base + t * stride] = line[t];
                }
            }
        }
        stride = block;
    }
}
