//! Misaligned Michelson interferometer.
//!
//! The two arm outputs are the input field displaced by `-shear/2` and
//! `+shear/2`; the second (tilted) arm also picks up the carrier
//! `exp(i (tilt_x x + tilt_y y + arm_phase))`:
//!
//! ```text
//! I(x, y) = | E(x + dx/2, y + dy/2)
//!           + r exp(i (tx x + ty y + phi)) E(x - dx/2, y - dy/2) |^2
//! ```
//!
//! A tilt about the vertical axis (`tilt_x`) gives vertical stripes. The
//! shear overlaps the side of one copy of a doughnut with the center of the
//! other, which puts a fork at each copy's singularity.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fft::{fft2, ifft2};
use crate::field::ComplexField;
use crate::grid::{GridSpec, RealGrid};

/// Default fringe period as a fraction of the beam waist.
pub const DEFAULT_FRINGE_PERIOD_PER_WAIST: f64 = 0.2;
/// Default horizontal shear as a fraction of the beam waist.
pub const DEFAULT_SHEAR_PER_WAIST: f64 = 0.8;
/// Default `tilt_y / tilt_x`, the small vertical misalignment.
pub const DEFAULT_TILT_RATIO: f64 = 0.12;
/// Minimum fringe period in grid cells.
pub const MIN_FRINGE_CELLS: f64 = 4.0;
/// Largest shift (or shear) as a fraction of the grid extent.
pub const MAX_SHIFT_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MichelsonConfig {
    /// Carrier spatial frequencies of the tilted arm (rad/m).
    pub tilt_x: f64,
    pub tilt_y: f64,
    /// Lateral displacement between the two arm outputs (m).
    #[serde(default)]
    pub shear: (f64, f64),
    #[serde(default)]
    pub arm_phase: f64,
    #[serde(default = "unit_ratio")]
    pub arm_ratio: f64,
}

fn unit_ratio() -> f64 {
    1.0
}

impl Default for MichelsonConfig {
    fn default() -> Self {
        MichelsonConfig::aligned()
    }
}

impl MichelsonConfig {
    /// No tilt, no shear, equal arms.
    pub fn aligned() -> Self {
        MichelsonConfig {
            tilt_x: 0.0,
            tilt_y: 0.0,
            shear: (0.0, 0.0),
            arm_phase: 0.0,
            arm_ratio: 1.0,
        }
    }

    /// Horizontal misalignment giving vertical fringes of `period`, a vertical
    /// tilt of `tilt_ratio * tilt_x`, and horizontal `shear`.
    pub fn from_fringes(period: f64, tilt_ratio: f64, shear: f64) -> Self {
        let tilt_x = TAU / period;
        MichelsonConfig {
            tilt_x,
            tilt_y: tilt_ratio * tilt_x,
            shear: (shear, 0.0),
            arm_phase: 0.0,
            arm_ratio: 1.0,
        }
    }

    /// Default misalignment for a beam of waist `w0`.
    pub fn for_waist(w0: f64) -> Self {
        Self::from_fringes(
            DEFAULT_FRINGE_PERIOD_PER_WAIST * w0,
            DEFAULT_TILT_RATIO,
            DEFAULT_SHEAR_PER_WAIST * w0,
        )
    }

    pub fn carrier(&self) -> (f64, f64) {
        (self.tilt_x, self.tilt_y)
    }

    pub fn carrier_magnitude(&self) -> f64 {
        self.tilt_x.hypot(self.tilt_y)
    }

    /// Fringe period (m); infinite without tilt.
    pub fn fringe_period(&self) -> f64 {
        let k = self.carrier_magnitude();
        if k == 0.0 {
            f64::INFINITY
        } else {
            TAU / k
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.arm_ratio > 0.0 && self.arm_ratio.is_finite()) {
            return Err(Error::Domain(format!(
                "arm ratio must be positive, got {}",
                self.arm_ratio
            )));
        }
        for v in [
            self.tilt_x,
            self.tilt_y,
            self.shear.0,
            self.shear.1,
            self.arm_phase,
        ] {
            if !v.is_finite() {
                return Err(Error::Domain(
                    "interferometer parameters must be finite".into(),
                ));
            }
        }
        Ok(())
    }

    /// Checks that the fringes are resolvable on `grid`.
    pub fn check_sampling(&self, grid: &GridSpec) -> Result<()> {
        self.validate()?;
        let cell = grid.dx().max(grid.dy());
        let period = self.fringe_period();
        if period < MIN_FRINGE_CELLS * cell {
            return Err(Error::Sampling(format!(
                "fringe period {period:.3e} m is under {MIN_FRINGE_CELLS} cells of {cell:.3e} m"
            )));
        }
        Ok(())
    }

    /// Checks that the fringes are resolvable and the shear fits on `grid`.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        self.check_sampling(grid)?;
        if self.shear.0.abs() > MAX_SHIFT_FRACTION * grid.extent_x
            || self.shear.1.abs() > MAX_SHIFT_FRACTION * grid.extent_y
        {
            return Err(Error::Geometry(format!(
                "shear {:?} exceeds {} of the grid extent",
                self.shear, MAX_SHIFT_FRACTION
            )));
        }
        Ok(())
    }
}

/// Translate a field by `(dx, dy)` with a Fourier phase ramp, so the result
/// at `(x, y)` is the input at `(x - dx, y - dy)` on the periodic grid.
pub fn shift_field(f: &ComplexField, dx: f64, dy: f64) -> Result<ComplexField> {
    let g = *f.grid();
    if !(dx.is_finite() && dy.is_finite()) {
        return Err(Error::Geometry("shift must be finite".into()));
    }
    if dx.abs() > MAX_SHIFT_FRACTION * g.extent_x || dy.abs() > MAX_SHIFT_FRACTION * g.extent_y {
        return Err(Error::Geometry(format!(
            "shift ({dx:.3e}, {dy:.3e}) exceeds {MAX_SHIFT_FRACTION} of the grid extent"
        )));
    }
    if dx == 0.0 && dy == 0.0 {
        return Ok(f.clone());
    }
    let mut spec = f.amplitude().to_vec();
    fft2(&mut spec, g.n_x, g.n_y);
    let ramp_x: Vec<Complex64> = (0..g.n_x)
        .map(|k| Complex64::from_polar(1.0, -g.kx(k) * dx))
        .collect();
    for ky in 0..g.n_y {
        let ry = Complex64::from_polar(1.0, -g.ky(ky) * dy);
        for kx in 0..g.n_x {
            spec[g.index(kx, ky)] *= ramp_x[kx] * ry;
        }
    }
    ifft2(&mut spec, g.n_x, g.n_y);
    Ok(f.with_amplitude(spec))
}

pub fn michelson_interferogram(f: &ComplexField, cfg: &MichelsonConfig) -> Result<RealGrid> {
    let g = *f.grid();
    cfg.check_grid(&g)?;
    let (sx, sy) = cfg.shear;
    let first = shift_field(f, -0.5 * sx, -0.5 * sy)?;
    let second = shift_field(f, 0.5 * sx, 0.5 * sy)?;

    let mut values = Vec::with_capacity(g.len());
    for j in 0..g.n_y {
        let y = g.y(j);
        for i in 0..g.n_x {
            let x = g.x(i);
            let carrier = if cfg.tilt_x == 0.0 && cfg.tilt_y == 0.0 && cfg.arm_phase == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, cfg.tilt_x * x + cfg.tilt_y * y + cfg.arm_phase)
            };
            let k = g.index(i, j);
            let sum = first.amplitude()[k] + carrier * cfg.arm_ratio * second.amplitude()[k];
            values.push(sum.norm_sqr());
        }
    }
    RealGrid::new(g, values)
}
