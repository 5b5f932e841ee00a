//! Laguerre-Gauss modes at the beam waist.
//!
//! The field carries `exp(+i m phi)` with `phi = atan2(y - y0, x - x0)`, so a
//! positive `charge_m` winds counter-clockwise in right-handed axes. The
//! azimuthal factor is built as `((x - x0) ± i (y - y0))^|m|` rather than from
//! `atan2`, which keeps `LG(m)(-x, y) = (-1)^m LG(-m)(x, y)` exact on the grid.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::GridSpec;

/// Minimum waist in grid cells.
pub const MIN_WAIST_CELLS: f64 = 4.0;
/// The grid extent must be at least this many times `w0 * sqrt(2p + |m| + 1)`.
pub const EXTENT_PER_MODE_RADIUS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LGModeSpec {
    /// Waist radius w0 (m).
    pub waist: f64,
    #[serde(default)]
    pub radial_index: u32,
    /// Topological charge, i.e. OAM per photon in units of hbar.
    #[serde(default)]
    pub charge: i32,
    #[serde(default)]
    pub center: (f64, f64),
    #[serde(default)]
    pub global_phase: f64,
    pub wavelength: f64,
}

impl LGModeSpec {
    pub fn new(waist: f64, charge: i32, wavelength: f64) -> Self {
        LGModeSpec {
            waist,
            radial_index: 0,
            charge,
            center: (0.0, 0.0),
            global_phase: 0.0,
            wavelength,
        }
    }

    pub fn with_radial_index(mut self, p: u32) -> Self {
        self.radial_index = p;
        self
    }

    pub fn with_center(mut self, x: f64, y: f64) -> Self {
        self.center = (x, y);
        self
    }

    pub fn with_global_phase(mut self, phase: f64) -> Self {
        self.global_phase = phase;
        self
    }

    /// `sqrt(2p + |m| + 1)`: ratio of the mode's RMS size to that of the
    /// fundamental Gaussian.
    pub fn size_factor(&self) -> f64 {
        ((2 * self.radial_index) as f64 + self.charge.unsigned_abs() as f64 + 1.0).sqrt()
    }

    /// Radius of peak intensity for `p = 0`: `w0 sqrt(|m| / 2)`.
    pub fn ring_radius(&self) -> f64 {
        self.waist * (self.charge.unsigned_abs() as f64 / 2.0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waist > 0.0 && self.waist.is_finite()) {
            return Err(Error::Domain(format!(
                "waist must be positive, got {}",
                self.waist
            )));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        Ok(())
    }

    fn check_resolution(&self, grid: &GridSpec) -> Result<()> {
        let cell = grid.dx().max(grid.dy());
        if self.waist < MIN_WAIST_CELLS * cell {
            return Err(Error::Sampling(format!(
                "waist {:.3e} m spans fewer than {MIN_WAIST_CELLS} cells of {:.3e} m",
                self.waist, cell
            )));
        }
        let needed = EXTENT_PER_MODE_RADIUS * self.waist * self.size_factor();
        let extent = grid.extent_x.min(grid.extent_y);
        if extent < needed * (1.0 - 1e-12) {
            return Err(Error::Sampling(format!(
                "grid extent {extent:.3e} m is below {needed:.3e} m needed for LG(p={}, m={})",
                self.radial_index, self.charge
            )));
        }
        Ok(())
    }

    /// `sqrt(2 p! / (pi (p + |m|)!)) / w0`, the unit-power normalization.
    pub fn normalization(&self) -> f64 {
        let p = self.radial_index as u64;
        let am = self.charge.unsigned_abs() as u64;
        // p! / (p + |m|)! accumulated as a product to stay finite
        let ratio: f64 = (p + 1..=p + am).map(|k| 1.0 / k as f64).product();
        (2.0 * ratio / PI).sqrt() / self.waist
    }
}

/// Generalized Laguerre polynomial `L_p^alpha(x)` by the three-term recurrence.
pub fn generalized_laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Sample a waist-plane LG mode normalized to unit total power.
pub fn synthesize_lg(spec: &LGModeSpec, grid: &GridSpec) -> Result<ComplexField> {
    spec.validate()?;
    grid.validate()?;
    spec.check_resolution(grid)?;

    let w0 = spec.waist;
    let am = spec.charge.unsigned_abs();
    let sign = if spec.charge >= 0 { 1.0 } else { -1.0 };
    let norm = spec.normalization();
    let phase = Complex64::from_polar(1.0, spec.global_phase);
    let scale = std::f64::consts::SQRT_2 / w0;
    let (x0, y0) = spec.center;

    ComplexField::from_fn(*grid, spec.wavelength, |x, y| {
        let (u, v) = (x - x0, y - y0);
        let rho2 = (u * u + v * v) / (w0 * w0);
        let helix = Complex64::new(u * scale, sign * v * scale).powu(am);
        let radial = generalized_laguerre(spec.radial_index, am as f64, 2.0 * rho2) * (-rho2).exp();
        helix * (norm * radial) * phase
    })
}
