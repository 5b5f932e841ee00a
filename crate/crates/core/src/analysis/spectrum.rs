//! Azimuthal (OAM) decomposition of a field about a chosen center.
//!
//! The field is resampled bilinearly onto `n_x / 2` rings of
//! [`AZIMUTHAL_SAMPLES`] points each, every ring is Fourier-transformed in
//! angle, and `P_m = sum_r |c_m(r)|^2 2 pi r dr`. The polar quadrature is then
//! rescaled so that all harmonics together carry exactly the Cartesian
//! `total_power` of the field; only ratios between charges are physical.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::ComplexField;

pub const AZIMUTHAL_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OAMSpectrum {
    /// Charges `-window..=window` are resolved individually.
    pub window: i32,
    /// Power per charge, index `m + window`.
    pub power: Vec<f64>,
    /// Power in charges outside the window.
    pub residual: f64,
}

impl OAMSpectrum {
    pub fn charges(&self) -> impl Iterator<Item = i32> {
        -self.window..=self.window
    }

    pub fn power_at(&self, m: i32) -> f64 {
        if m.abs() > self.window {
            return 0.0;
        }
        self.power[(m + self.window) as usize]
    }

    pub fn total(&self) -> f64 {
        self.power.iter().sum::<f64>() + self.residual
    }

    /// Share of the total power carried by charge `m`.
    pub fn fraction(&self, m: i32) -> f64 {
        let t = self.total();
        if t == 0.0 {
            0.0
        } else {
            self.power_at(m) / t
        }
    }

    /// Charge with the most power. Ties go to the smaller `|m|`, then to the
    /// positive charge.
    pub fn dominant_charge(&self) -> Result<i32> {
        if !(self.total() > 0.0) {
            return Err(Error::Domain("spectrum of a zero-power field".into()));
        }
        let mut best = 0;
        let mut best_power = self.power_at(0);
        for k in 1..=self.window {
            for m in [k, -k] {
                let p = self.power_at(m);
                if p > best_power {
                    best = m;
                    best_power = p;
                }
            }
        }
        Ok(best)
    }
}

/// Free-function form of [`OAMSpectrum::dominant_charge`].
pub fn dominant_charge(s: &OAMSpectrum) -> Result<i32> {
    s.dominant_charge()
}

pub fn oam_spectrum(f: &ComplexField, center: (f64, f64), window: i32) -> Result<OAMSpectrum> {
    let half = (AZIMUTHAL_SAMPLES / 2) as i32;
    if window < 1 || window >= half {
        return Err(Error::Domain(format!(
            "charge window must be in 1..{half}, got {window}"
        )));
    }
    let g = *f.grid();
    let (cx, cy) = center;
    if !g.contains(cx, cy) {
        return Err(Error::Geometry(format!(
            "center ({cx:.3e}, {cy:.3e}) lies outside the grid"
        )));
    }
    let r_max = (cx - g.x_min())
        .min(g.x_max() - cx)
        .min(cy - g.y_min())
        .min(g.y_max() - cy);
    if r_max <= 0.0 {
        return Err(Error::Geometry("center lies on the grid boundary".into()));
    }

    let n_r = g.n_x / 2;
    let dr = r_max / n_r as f64;
    let n_phi = AZIMUTHAL_SAMPLES;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_phi);
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n_phi)
        .map(|l| {
            let a = TAU * l as f64 / n_phi as f64;
            (a.cos(), a.sin())
        })
        .unzip();

    let mut harmonics = vec![0.0; n_phi];
    let mut ring = vec![Complex64::default(); n_phi];
    for k in 0..n_r {
        let r = (k as f64 + 0.5) * dr;
        for l in 0..n_phi {
            ring[l] = bilinear(f, cx + r * cos[l], cy + r * sin[l]);
        }
        fft.process(&mut ring);
        let weight = TAU * r * dr / (n_phi * n_phi) as f64;
        for (h, c) in harmonics.iter_mut().zip(&ring) {
            *h += c.norm_sqr() * weight;
        }
    }

    let polar_total: f64 = harmonics.iter().sum();
    let scale = if polar_total > 0.0 {
        f.total_power() / polar_total
    } else {
        0.0
    };
    let power: Vec<f64> = (-window..=window)
        .map(|m| harmonics[m.rem_euclid(n_phi as i32) as usize] * scale)
        .collect();
    let in_window: f64 = power.iter().sum();
    let residual = (polar_total * scale - in_window).max(0.0);
    Ok(OAMSpectrum {
        window,
        power,
        residual,
    })
}

fn bilinear(f: &ComplexField, x: f64, y: f64) -> Complex64 {
    let g = f.grid();
    let (fi, fj) = g.to_fractional(x, y);
    let i0 = (fi.floor() as isize).clamp(0, g.n_x as isize - 2) as usize;
    let j0 = (fj.floor() as isize).clamp(0, g.n_y as isize - 2) as usize;
    let u = fi - i0 as f64;
    let v = fj - j0 as f64;
    f.at(i0, j0) * ((1.0 - u) * (1.0 - v))
        + f.at(i0 + 1, j0) * (u * (1.0 - v))
        + f.at(i0, j0 + 1) * ((1.0 - u) * v)
        + f.at(i0 + 1, j0 + 1) * (u * v)
}
