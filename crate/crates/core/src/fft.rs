//! Two-dimensional FFT helpers over row-major buffers.
//!
//! Transforms are unnormalized in both directions; callers divide by
//! `n_x * n_y` after an inverse transform.

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

pub(crate) fn fft2(data: &mut [Complex64], n_x: usize, n_y: usize) {
    transform(data, n_x, n_y, FftDirection::Forward);
}

/// Inverse transform including the `1 / (n_x n_y)` normalization.
pub(crate) fn ifft2(data: &mut [Complex64], n_x: usize, n_y: usize) {
    transform(data, n_x, n_y, FftDirection::Inverse);
    let scale = 1.0 / (n_x * n_y) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn transform(data: &mut [Complex64], n_x: usize, n_y: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), n_x * n_y);
    let mut planner = FftPlanner::<f64>::new();

    let rows = planner.plan_fft(n_x, direction);
    let mut scratch = vec![Complex64::default(); rows.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n_x) {
        rows.process_with_scratch(row, &mut scratch);
    }

    let cols = planner.plan_fft(n_y, direction);
    let mut column = vec![Complex64::default(); n_y];
    let mut scratch = vec![Complex64::default(); cols.get_inplace_scratch_len()];
    for i in 0..n_x {
        for (j, c) in column.iter_mut().enumerate() {
            *c = data[j * n_x + i];
        }
        cols.process_with_scratch(&mut column, &mut scratch);
        for (j, c) in column.iter().enumerate() {
            data[j * n_x + i] = *c;
        }
    }
}
