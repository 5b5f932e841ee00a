//! Fourier-transform fringe analysis.
//!
//! The interferogram spectrum has a DC lobe at the origin and two sidelobes
//! at `±carrier`. The `+carrier` lobe is cut out with a disk of radius
//! `|carrier| / 2`, transformed back, and multiplied by
//! `exp(-i carrier . r)`. For the Michelson model this leaves
//! `r conj(E(x + s/2)) E(x - s/2) exp(i arm_phase)`.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft2, ifft2};
use crate::field::principal_value;
use crate::grid::{GridSpec, RealGrid};

/// The carrier must sit this many DC-lobe RMS widths from the origin.
pub const MIN_LOBE_SEPARATION: f64 = 3.0;
/// The carrier must sit at least this many frequency bins from DC.
pub const MIN_CARRIER_BINS: f64 = 4.0;

/// Complex baseband signal from the `+carrier` lobe plus spectral bookkeeping.
#[derive(Debug, Clone)]
pub struct Demodulated {
    pub grid: GridSpec,
    pub signal: Vec<Complex64>,
    /// Low-passed intensity (the DC lobe alone), real part.
    pub background: Vec<f64>,
    pub lobe_power: f64,
    pub residual_power: f64,
    /// Carrier as measured from the lobe peak (rad/m).
    pub measured_carrier: (f64, f64),
}

impl Demodulated {
    /// Wrapped phase of the baseband signal in (-pi, pi].
    pub fn phase(&self) -> RealGrid {
        RealGrid {
            grid: self.grid,
            values: self
                .signal
                .iter()
                .map(|s| principal_value(s.arg()))
                .collect(),
        }
    }

    /// `lobe / (lobe + residual)`, where the residual is spectral power
    /// outside the DC disk and both carrier disks.
    pub fn confidence(&self) -> f64 {
        let denom = self.lobe_power + self.residual_power;
        if denom > 0.0 {
            (self.lobe_power / denom).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

pub fn demodulate(intensity: &RealGrid, carrier: (f64, f64)) -> Result<Demodulated> {
    let g = intensity.grid;
    let (cx, cy) = carrier;
    let c = cx.hypot(cy);
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Demodulation(
            "carrier frequency must be nonzero".into(),
        ));
    }
    let (dkx, dky) = g.dk();
    let bins = (cx / dkx).hypot(cy / dky);
    if bins < MIN_CARRIER_BINS {
        return Err(Error::Demodulation(format!(
            "carrier is {bins:.2} frequency bins from DC, need {MIN_CARRIER_BINS}"
        )));
    }
    let radius = 0.5 * c;

    let mut spec: Vec<Complex64> = intensity
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft2(&mut spec, g.n_x, g.n_y);

    let mut lobe = vec![Complex64::default(); g.len()];
    let mut dc = vec![Complex64::default(); g.len()];
    let (mut lobe_power, mut other_lobe, mut dc_power, mut total) = (0.0, 0.0, 0.0, 0.0);
    let (mut dc_moment, mut peak, mut peak_bin) = (0.0, -1.0, (0usize, 0usize));
    for ky in 0..g.n_y {
        let fy = g.ky(ky);
        for kx in 0..g.n_x {
            let fx = g.kx(kx);
            let idx = g.index(kx, ky);
            let p = spec[idx].norm_sqr();
            total += p;
            let k2 = fx * fx + fy * fy;
            if k2.sqrt() < radius {
                dc[idx] = spec[idx];
                dc_power += p;
                dc_moment += p * k2;
            } else if (fx - cx).hypot(fy - cy) < radius {
                lobe[idx] = spec[idx];
                lobe_power += p;
                if p > peak {
                    peak = p;
                    peak_bin = (kx, ky);
                }
            } else if (fx + cx).hypot(fy + cy) < radius {
                other_lobe += p;
            }
        }
    }
    if lobe_power == 0.0 {
        return Err(Error::Demodulation(
            "no spectral power in the carrier lobe".into(),
        ));
    }
    let width = if dc_power > 0.0 {
        (dc_moment / dc_power).sqrt()
    } else {
        0.0
    };
    if c < MIN_LOBE_SEPARATION * width {
        return Err(Error::Demodulation(format!(
            "carrier {c:.3e} rad/m is within {MIN_LOBE_SEPARATION}x the DC lobe width {width:.3e} rad/m"
        )));
    }
    let residual_power = (total - lobe_power - other_lobe - dc_power).max(0.0);
    let measured_carrier = refine_peak(&spec, &g, peak_bin);

    ifft2(&mut lobe, g.n_x, g.n_y);
    ifft2(&mut dc, g.n_x, g.n_y);
    for j in 0..g.n_y {
        let y = g.y(j);
        for i in 0..g.n_x {
            let x = g.x(i);
            lobe[g.index(i, j)] *= Complex64::from_polar(1.0, -(cx * x + cy * y));
        }
    }
    Ok(Demodulated {
        grid: g,
        signal: lobe,
        background: dc.iter().map(|v| v.re).collect(),
        lobe_power,
        residual_power,
        measured_carrier,
    })
}

/// Power-weighted centroid of the 3x3 bins around the lobe peak, with the
/// carrier's sign fixed so that `kx >= 0`.
fn refine_peak(spec: &[Complex64], g: &GridSpec, (kx, ky): (usize, usize)) -> (f64, f64) {
    let (dkx, dky) = g.dk();
    let (fx0, fy0) = (g.kx(kx), g.ky(ky));
    let (mut w, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for oy in -1isize..=1 {
        for ox in -1isize..=1 {
            let bx = (kx as isize + ox).rem_euclid(g.n_x as isize) as usize;
            let by = (ky as isize + oy).rem_euclid(g.n_y as isize) as usize;
            let p = spec[g.index(bx, by)].norm_sqr();
            w += p;
            sx += p * (fx0 + ox as f64 * dkx);
            sy += p * (fy0 + oy as f64 * dky);
        }
    }
    let (mx, my) = if w > 0.0 {
        (sx / w, sy / w)
    } else {
        (fx0, fy0)
    };
    if mx < 0.0 {
        (-mx, -my)
    } else {
        (mx, my)
    }
}

/// Wrapped phase of the `+carrier` lobe, in (-pi, pi].
pub fn fringe_demodulate(intensity: &RealGrid, carrier: (f64, f64)) -> Result<RealGrid> {
    Ok(demodulate(intensity, carrier)?.phase())
}
