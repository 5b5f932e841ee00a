#![allow(dead_code)]

use spdc_oam::{synthesize_lg, ComplexField, GridSpec, LGModeSpec};

pub const W0: f64 = 1e-3;
pub const PUMP: f64 = 442e-9;
pub const AUX: f64 = 845e-9;

/// 256 x 256 samples over eight waists.
pub fn grid() -> GridSpec {
    GridSpec::square(256, 8.0 * W0).unwrap()
}

pub fn small_grid() -> GridSpec {
    GridSpec::square(128, 8.0 * W0).unwrap()
}

pub fn lg(m: i32, g: &GridSpec) -> ComplexField {
    synthesize_lg(&LGModeSpec::new(W0, m, PUMP), g).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
