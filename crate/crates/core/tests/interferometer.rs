mod common;

use common::*;
use spdc_oam::interferometer::MAX_SHIFT_FRACTION;
use spdc_oam::{
    detect_fork, michelson_interferogram, shift_field, total_power, Complex64, ComplexField, Error,
    MichelsonConfig, RealGrid,
};
use std::f64::consts::TAU;

#[test]
fn one_cell_shift_is_a_roll() {
    let g = grid();
    let f = lg(1, &g);
    let s = shift_field(&f, g.dx(), -g.dy()).unwrap();
    let mut worst: f64 = 0.0;
    for j in 2..g.n_y - 2 {
        for i in 2..g.n_x - 2 {
            worst = worst.max((s.at(i, j) - f.at(i - 1, j + 1)).norm());
        }
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn shifts_invert_and_conserve_power() {
    let g = grid();
    let f = lg(2, &g);
    let (dx, dy) = (0.37 * W0, -0.81 * W0);
    let s = shift_field(&f, dx, dy).unwrap();
    assert!((total_power(&s) / total_power(&f) - 1.0).abs() < 1e-9);
    let back = shift_field(&s, -dx, -dy).unwrap();
    for (a, b) in back.amplitude().iter().zip(f.amplitude()) {
        assert!((a - b).norm() < 1e-9);
    }
    let zero = shift_field(&f, 0.0, 0.0).unwrap();
    assert_eq!(zero.amplitude(), f.amplitude());
}

#[test]
fn shift_moves_the_centroid() {
    let g = grid();
    let f = lg(0, &g);
    let (dx, dy) = (0.4321 * W0, 0.1234 * W0);
    let c = shift_field(&f, dx, dy)
        .unwrap()
        .intensity()
        .centroid()
        .unwrap();
    assert!((c.0 - dx).abs() < 1e-3 * g.dx());
    assert!((c.1 - dy).abs() < 1e-3 * g.dy());
}

#[test]
fn excessive_shift_is_a_geometry_error() {
    let g = small_grid();
    let f = lg(0, &g);
    let too_far = 1.01 * MAX_SHIFT_FRACTION * g.extent_x;
    assert!(matches!(
        shift_field(&f, too_far, 0.0),
        Err(Error::Geometry(_))
    ));
}

#[test]
fn aligned_interferometer_quadruples_any_input() {
    let g = grid();
    let f = lg(1, &g).add(&lg(-2, &g)).unwrap();
    let i = michelson_interferogram(&f, &MichelsonConfig::aligned()).unwrap();
    let want = f.intensity();
    for (a, b) in i.values.iter().zip(&want.values) {
        assert!((a - 4.0 * b).abs() <= 1e-12 * (1.0 + b));
    }
}

#[test]
fn intensity_is_bounded_by_the_arms() {
    let g = grid();
    let f = lg(1, &g);
    let cfg = MichelsonConfig::for_waist(W0);
    let i = michelson_interferogram(&f, &cfg).unwrap();
    let a = shift_field(&f, -0.5 * cfg.shear.0, 0.0)
        .unwrap()
        .intensity();
    let b = shift_field(&f, 0.5 * cfg.shear.0, 0.0).unwrap().intensity();
    for k in 0..g.len() {
        let bound = (a.values[k].sqrt() + b.values[k].sqrt()).powi(2);
        assert!(i.values[k] >= 0.0 && i.values[k] <= bound * (1.0 + 1e-9) + 1e-300);
    }
}

fn plane_wave(g: &spdc_oam::GridSpec) -> ComplexField {
    ComplexField::from_fn(*g, PUMP, |_, _| Complex64::new(1.0, 0.0)).unwrap()
}

/// Index of the strongest nonzero-frequency bin along x of row 0 of the
/// column-summed intensity.
fn dominant_bin(i: &RealGrid) -> usize {
    let g = i.grid;
    let row: Vec<f64> = (0..g.n_x).map(|k| i.at(k, g.n_y / 2)).collect();
    (1..g.n_x / 2)
        .max_by(|&a, &b| {
            let p = |k: usize| {
                let (mut re, mut im) = (0.0, 0.0);
                for (n, v) in row.iter().enumerate() {
                    let t = TAU * (k * n) as f64 / g.n_x as f64;
                    re += v * t.cos();
                    im -= v * t.sin();
                }
                re * re + im * im
            };
            p(a).total_cmp(&p(b))
        })
        .unwrap()
}

#[test]
fn tilt_gives_vertical_stripes_that_narrow_with_misalignment() {
    let g = small_grid();
    let f = plane_wave(&g);
    let mut last_period = f64::INFINITY;
    for bins in [5usize, 10, 20] {
        let period = g.extent_x / bins as f64;
        let cfg = MichelsonConfig::from_fringes(period, 0.0, 0.0);
        let i = michelson_interferogram(&f, &cfg).unwrap();
        // vertical stripes: constant along y
        for j in 0..g.n_y {
            assert!((i.at(7, j) - i.at(7, 0)).abs() < 1e-9);
        }
        assert_eq!(dominant_bin(&i), bins);
        assert!(period < last_period);
        last_period = period;
    }
}

#[test]
fn unresolvable_fringes_are_sampling_errors() {
    let g = small_grid();
    let cfg = MichelsonConfig::from_fringes(3.5 * g.dx(), 0.0, 0.0);
    assert!(matches!(
        michelson_interferogram(&plane_wave(&g), &cfg),
        Err(Error::Sampling(_))
    ));
}

#[test]
fn untilted_vortex_patterns_are_mirror_images() {
    // wide enough for the tails to vanish at the unpaired edge column
    let g = spdc_oam::GridSpec::square(256, 10.0 * W0).unwrap();
    let cfg = MichelsonConfig {
        tilt_y: 0.0,
        ..MichelsonConfig::for_waist(W0)
    };
    for m in 1..=3 {
        let plus = michelson_interferogram(&lg(m, &g), &cfg).unwrap();
        let minus = michelson_interferogram(&lg(-m, &g), &cfg).unwrap();
        let d = minus.max_relative_difference(&plus.mirror_x());
        assert!(d < 1e-9, "m={m}: {d:e}");
    }
}

#[test]
fn charge_round_trips_through_the_interferometer() {
    let g = grid();
    let cfg = MichelsonConfig::for_waist(W0);
    for m in -2..=2 {
        let i = michelson_interferogram(&lg(m, &g), &cfg).unwrap();
        let r = detect_fork(&i, &cfg).unwrap();
        assert_eq!(r.charge, m);
        assert_eq!(r.singularity_location.is_some(), m != 0);
    }
}
