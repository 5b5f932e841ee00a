//! Discrete winding number of a wrapped phase map around a circle.

use rustfft::num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::field::principal_value;
use crate::grid::RealGrid;

pub const MIN_LOOP_SAMPLES: usize = 64;
/// Interpolated unit phasors shorter than this mean the four neighbouring
/// samples disagree on the phase.
const MIN_PHASOR_COHERENCE: f64 = 0.3;
const MAX_STEP: f64 = 0.75 * PI;

/// Sum of principal-value phase increments around the circle, over `2 pi`.
///
/// The phase is interpolated as a unit phasor. At least
/// [`MIN_LOOP_SAMPLES`] points are used, and never fewer than two per cell of
/// circumference.
pub fn winding_number(phase: &RealGrid, center: (f64, f64), radius: f64) -> Result<i32> {
    let g = phase.grid;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!(
            "loop radius must be positive, got {radius}"
        )));
    }
    let (cx, cy) = center;
    if cx - radius < g.x_min()
        || cx + radius > g.x_max()
        || cy - radius < g.y_min()
        || cy + radius > g.y_max()
    {
        return Err(Error::Geometry(format!(
            "loop of radius {radius:.3e} at ({cx:.3e}, {cy:.3e}) leaves the grid"
        )));
    }
    let cell = g.dx().min(g.dy());
    let samples = MIN_LOOP_SAMPLES.max((2.0 * TAU * radius / cell).ceil() as usize);

    let mut total = 0.0;
    let mut prev = None;
    let mut first = 0.0;
    for l in 0..samples {
        let a = TAU * l as f64 / samples as f64;
        let z = interpolate_phasor(phase, cx + radius * a.cos(), cy + radius * a.sin());
        if z.norm() < MIN_PHASOR_COHERENCE {
            return Err(Error::UnreliableLoop(format!(
                "phase is incoherent near ({:.3e}, {:.3e})",
                cx + radius * a.cos(),
                cy + radius * a.sin()
            )));
        }
        let p = z.arg();
        match prev {
            None => first = p,
            Some(q) => total += step(p - q)?,
        }
        prev = Some(p);
    }
    total += step(first - prev.unwrap_or(first))?;
    Ok((total / TAU).round() as i32)
}

fn step(d: f64) -> Result<f64> {
    let d = principal_value(d);
    if d.abs() > MAX_STEP {
        return Err(Error::UnreliableLoop(format!(
            "phase jumps by {d:.2} rad between loop samples"
        )));
    }
    Ok(d)
}

fn interpolate_phasor(phase: &RealGrid, x: f64, y: f64) -> Complex64 {
    let g = phase.grid;
    let (fi, fj) = g.to_fractional(x, y);
    let i0 = (fi.floor() as isize).clamp(0, g.n_x as isize - 2) as usize;
    let j0 = (fj.floor() as isize).clamp(0, g.n_y as isize - 2) as usize;
    let u = fi - i0 as f64;
    let v = fj - j0 as f64;
    let p = |i, j| Complex64::from_polar(1.0, phase.at(i, j));
    p(i0, j0) * ((1.0 - u) * (1.0 - v))
        + p(i0 + 1, j0) * (u * (1.0 - v))
        + p(i0, j0 + 1) * ((1.0 - u) * v)
        + p(i0 + 1, j0 + 1) * (u * v)
}

/// Residue (net winding) of every 2x2 plaquette, indexed by its lower-left
/// sample; the result is `(n_x - 1) x (n_y - 1)`, row-major.
pub fn plaquette_residues(phase: &RealGrid) -> Vec<i32> {
    let g = phase.grid;
    let (w, h) = (g.n_x - 1, g.n_y - 1);
    let mut out = Vec::with_capacity(w * h);
    for j in 0..h {
        for i in 0..w {
            let a = phase.at(i, j);
            let b = phase.at(i + 1, j);
            let c = phase.at(i + 1, j + 1);
            let d = phase.at(i, j + 1);
            let s = principal_value(b - a)
                + principal_value(c - b)
                + principal_value(d - c)
                + principal_value(a - d);
            out.push((s / TAU).round() as i32);
        }
    }
    out
}
