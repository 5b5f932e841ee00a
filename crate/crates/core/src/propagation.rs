//! Free-space propagation and thin lenses.

use rustfft::num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fft::{fft2, ifft2};
use crate::field::ComplexField;

/// Fraction of the Nyquist band treated as the outer guard ring.
pub const GUARD_BAND: f64 = 0.9;
/// Maximum relative spectral energy allowed in the guard ring.
pub const GUARD_TOLERANCE: f64 = 1e-6;

/// Relative energy in spectral bins whose frequency exceeds
/// [`GUARD_BAND`] of Nyquist along either axis.
pub fn guard_band_fraction(spectrum: &[Complex64], field: &ComplexField) -> f64 {
    let g = field.grid();
    let (nq_x, nq_y) = g.k_nyquist();
    let (mut outer, mut total) = (0.0, 0.0);
    for ky in 0..g.n_y {
        let fy = g.ky(ky).abs() / nq_y;
        for kx in 0..g.n_x {
            let fx = g.kx(kx).abs() / nq_x;
            let p = spectrum[g.index(kx, ky)].norm_sqr();
            total += p;
            if fx.max(fy) > GUARD_BAND {
                outer += p;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

/// Angular-spectrum propagation over `distance` (m, may be negative).
///
/// Evanescent components (`kx^2 + ky^2 > k^2`) are set to zero.
pub fn propagate_angular_spectrum(f: &ComplexField, distance: f64) -> Result<ComplexField> {
    if !distance.is_finite() {
        return Err(Error::Domain(format!(
            "distance must be finite, got {distance}"
        )));
    }
    let g = *f.grid();
    let mut spec = f.amplitude().to_vec();
    fft2(&mut spec, g.n_x, g.n_y);

    let leak = guard_band_fraction(&spec, f);
    if leak > GUARD_TOLERANCE {
        return Err(Error::Sampling(format!(
            "field is not band-limited: {leak:.2e} of spectral energy near Nyquist"
        )));
    }
    if distance == 0.0 {
        return Ok(f.clone());
    }

    let k = TAU / f.wavelength();
    let k2 = k * k;
    for ky in 0..g.n_y {
        let ky_v = g.ky(ky);
        for kx in 0..g.n_x {
            let kx_v = g.kx(kx);
            let kz2 = k2 - kx_v * kx_v - ky_v * ky_v;
            let h = if kz2 > 0.0 {
                Complex64::from_polar(1.0, kz2.sqrt() * distance)
            } else {
                Complex64::default()
            };
            spec[g.index(kx, ky)] *= h;
        }
    }
    ifft2(&mut spec, g.n_x, g.n_y);
    Ok(f.with_amplitude(spec))
}

/// Multiply by the thin-lens phase `exp(-i pi (x^2 + y^2) / (lambda f))`.
pub fn apply_thin_lens(f: &ComplexField, focal_length: f64) -> Result<ComplexField> {
    if focal_length == 0.0 || !focal_length.is_finite() {
        return Err(Error::Domain(format!(
            "focal length must be finite and nonzero, got {focal_length}"
        )));
    }
    let c = -PI / (f.wavelength() * focal_length);
    Ok(f.map(|x, y, a| a * Complex64::from_polar(1.0, c * (x * x + y * y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::lg::{synthesize_lg, LGModeSpec};

    fn gaussian() -> ComplexField {
        let g = GridSpec::square(128, 8e-3).unwrap();
        synthesize_lg(&LGModeSpec::new(1e-3, 0, 633e-9), &g).unwrap()
    }

    #[test]
    fn zero_distance_is_identity() {
        let f = gaussian();
        let out = propagate_angular_spectrum(&f, 0.0).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn aliased_field_is_rejected() {
        let g = GridSpec::square(32, 1e-3).unwrap();
        let f = ComplexField::from_fn(g, 633e-9, |x, _| {
            // checkerboard along x sits exactly at Nyquist
            let i = (x / g.dx()).round() as i64;
            Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })
        .unwrap();
        assert!(matches!(
            propagate_angular_spectrum(&f, 1.0),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn lens_is_a_pure_phase_and_inverts() {
        let f = gaussian();
        let l = apply_thin_lens(&f, 0.5).unwrap();
        for (a, b) in l.amplitude().iter().zip(f.amplitude()) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() <= 1e-12 * b.norm_sqr().max(1e-300));
        }
        let back = apply_thin_lens(&l, -0.5).unwrap();
        let peak = f.amplitude().iter().fold(0.0f64, |m, a| m.max(a.norm()));
        for (a, b) in back.amplitude().iter().zip(f.amplitude()) {
            assert!((a - b).norm() < 1e-12 * peak);
        }
        assert!(matches!(apply_thin_lens(&f, 0.0), Err(Error::Domain(_))));
    }
}
