//! Reading the topological charge off a fork interferogram.
//!
//! The demodulated phase of a sheared Michelson interferogram carries a pair
//! of opposite singularities, one at each copy of the beam center. The copy
//! displaced along `+shear` went through the tilted arm and enters the
//! demodulated signal unconjugated, so the winding around it is the charge of
//! the input field. The other fork of the pair always reads the opposite sign.
//!
//! Pipeline:
//! 1. demodulate at the configured carrier;
//! 2. compute plaquette residues inside the beam support, where the
//!    low-passed intensity exceeds [`SUPPORT_THRESHOLD`] of its maximum;
//! 3. sum residues over a box the size of the winding loop and keep the box
//!    with the largest net charge on the `+shear` side, weighted by the local
//!    intensity;
//! 4. locate the singularity at the residue centroid inside that box and
//!    measure the winding number around it.
//!
//! The fork axis is the fringe direction, reported as the angle from vertical
//! of the measured carrier, `atan2(ky, kx)`: vertical stripes give zero and a
//! vertical misalignment rotates the forks. The carrier is measured from the
//! mean phase gradient of the baseband signal once the singularity pair
//! (`+m` at the detected fork, `-m` one shear length back) is divided out,
//! since the pair alone bends the fringes by a charge-dependent amount.

use serde::{Deserialize, Serialize};

use rustfft::num_complex::Complex64;

use super::fringe::{demodulate, Demodulated};
use super::winding::{plaquette_residues, winding_number};
use crate::error::{Error, Result};
use crate::grid::RealGrid;
use crate::interferometer::MichelsonConfig;

pub const SUPPORT_THRESHOLD: f64 = 0.1;
/// Winding loop radius as a fraction of the shear length.
pub const LOOP_RADIUS_PER_SHEAR: f64 = 0.45;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForkReport {
    pub charge: i32,
    /// `None` when no singularity was found (`charge == 0`).
    pub singularity_location: Option<(f64, f64)>,
    /// Fork axis angle from vertical (rad), counter-clockwise positive.
    pub axis_angle: f64,
    /// Demodulation quality in [0, 1]; see [`super::fringe::Demodulated::confidence`].
    pub confidence: f64,
}

pub fn detect_fork(intensity: &RealGrid, cfg: &MichelsonConfig) -> Result<ForkReport> {
    let g = intensity.grid;
    cfg.check_sampling(&g)?;
    let demod = demodulate(intensity, cfg.carrier())?;
    let confidence = demod.confidence();
    let no_fork = |bg_max: f64| ForkReport {
        charge: 0,
        singularity_location: None,
        axis_angle: fringe_angle(&demod, cfg, bg_max, None),
        confidence,
    };

    let phase = demod.phase();
    let (w, h) = (g.n_x - 1, g.n_y - 1);
    let bg = &demod.background;
    let bg_max = bg.iter().copied().fold(0.0f64, f64::max);
    if !(bg_max > 0.0) {
        return Ok(no_fork(bg_max));
    }

    let shear_len = cfg.shear.0.hypot(cfg.shear.1);
    let radius = if shear_len > 0.0 {
        LOOP_RADIUS_PER_SHEAR * shear_len
    } else {
        cfg.fringe_period()
    };
    let cell = g.dx().max(g.dy());
    let half_box = ((radius / cell).round() as usize).max(1);
    let beam_center = intensity.centroid().unwrap_or((0.0, 0.0));

    // plaquette (i, j) is centered half a cell up and right of sample (i, j)
    let center_of = |i: usize, j: usize| (g.x(i) + 0.5 * g.dx(), g.y(j) + 0.5 * g.dy());
    let mut residues = plaquette_residues(&phase);
    let mut support = vec![0.0; w * h];
    for j in 0..h {
        for i in 0..w {
            let k = j * w + i;
            let local = 0.25
                * (bg[g.index(i, j)]
                    + bg[g.index(i + 1, j)]
                    + bg[g.index(i, j + 1)]
                    + bg[g.index(i + 1, j + 1)]);
            let (px, py) = center_of(i, j);
            let on_side = shear_len == 0.0
                || (px - beam_center.0) * cfg.shear.0 + (py - beam_center.1) * cfg.shear.1 > 0.0;
            if local > SUPPORT_THRESHOLD * bg_max && on_side {
                support[k] = local;
            } else {
                residues[k] = 0;
            }
        }
    }

    let net = box_sums(&residues, w, h, half_box);
    let mut best = (0.0, 0usize);
    for (k, (&n, &s)) in net.iter().zip(&support).enumerate() {
        let score = n.unsigned_abs() as f64 * s;
        if score > best.0 {
            best = (score, k);
        }
    }
    if best.0 == 0.0 {
        return Ok(no_fork(bg_max));
    }

    let (bi, bj) = (best.1 % w, best.1 / w);
    let sign = net[best.1].signum();
    let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for j in bj.saturating_sub(half_box)..(bj + half_box + 1).min(h) {
        for i in bi.saturating_sub(half_box)..(bi + half_box + 1).min(w) {
            let r = residues[j * w + i];
            if r.signum() == sign {
                let (px, py) = center_of(i, j);
                let wt = r.unsigned_abs() as f64;
                sw += wt;
                sx += wt * px;
                sy += wt * py;
            }
        }
    }
    let (x0, y0) = if sw > 0.0 {
        (sx / sw, sy / sw)
    } else {
        center_of(bi, bj)
    };

    let margin = (x0 - g.x_min())
        .min(g.x_max() - x0)
        .min(y0 - g.y_min())
        .min(g.y_max() - y0)
        - cell;
    let loop_radius = radius.min(margin);
    if loop_radius < cell {
        return Err(Error::Demodulation(format!(
            "singularity at ({x0:.3e}, {y0:.3e}) is too close to the edge for a winding loop"
        )));
    }
    let charge = winding_number(&phase, (x0, y0), loop_radius)?;
    let pair = (charge != 0).then_some(((x0, y0), charge));
    Ok(ForkReport {
        charge,
        singularity_location: pair.map(|(at, _)| at),
        axis_angle: fringe_angle(&demod, cfg, bg_max, pair),
        confidence,
    })
}

/// Angle from vertical of the fringe carrier: the configured carrier plus the
/// mean residual phase gradient of the baseband signal inside the support,
/// after removing the singularity pair of charge `m` at `at` and `-m` at
/// `at - shear`.
fn fringe_angle(
    demod: &Demodulated,
    cfg: &MichelsonConfig,
    bg_max: f64,
    pair: Option<((f64, f64), i32)>,
) -> f64 {
    let g = demod.grid;
    let base: Vec<Complex64> = (0..g.len())
        .map(|k| {
            let s = demod.signal[k];
            match pair {
                Some(((x0, y0), m)) => {
                    let (x, y) = (g.x(k % g.n_x), g.y(k / g.n_x));
                    let (x1, y1) = (x0 - cfg.shear.0, y0 - cfg.shear.1);
                    let dipole = (y - y0).atan2(x - x0) - (y - y1).atan2(x - x1);
                    s * Complex64::from_polar(1.0, -(m as f64) * dipole)
                }
                None => s,
            }
        })
        .collect();
    let inside = |k: usize| demod.background[k] > SUPPORT_THRESHOLD * bg_max;
    let (mut gx, mut wx, mut gy, mut wy) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..g.n_y {
        for i in 0..g.n_x {
            let k = g.index(i, j);
            if !inside(k) {
                continue;
            }
            if i + 1 < g.n_x && inside(k + 1) {
                let z = base[k + 1] * base[k].conj();
                gx += z.norm() * z.arg();
                wx += z.norm();
            }
            if j + 1 < g.n_y && inside(k + g.n_x) {
                let z = base[k + g.n_x] * base[k].conj();
                gy += z.norm() * z.arg();
                wy += z.norm();
            }
        }
    }
    let (tx, ty) = cfg.carrier();
    let kx = tx + if wx > 0.0 { gx / (wx * g.dx()) } else { 0.0 };
    let ky = ty + if wy > 0.0 { gy / (wy * g.dy()) } else { 0.0 };
    // the carrier's sign is arbitrary; pick kx >= 0
    if kx < 0.0 {
        (-ky).atan2(-kx)
    } else {
        ky.atan2(kx)
    }
}

/// Sum of `values` over the `(2 r + 1)^2` box around every cell, clipped to
/// the array.
fn box_sums(values: &[i32], w: usize, h: usize, r: usize) -> Vec<i32> {
    // summed-area table with a zero border
    let mut sat = vec![0i64; (w + 1) * (h + 1)];
    for j in 0..h {
        for i in 0..w {
            sat[(j + 1) * (w + 1) + i + 1] =
                values[j * w + i] as i64 + sat[j * (w + 1) + i + 1] + sat[(j + 1) * (w + 1) + i]
                    - sat[j * (w + 1) + i];
        }
    }
    let mut out = Vec::with_capacity(w * h);
    for j in 0..h {
        let (j0, j1) = (j.saturating_sub(r), (j + r + 1).min(h));
        for i in 0..w {
            let (i0, i1) = (i.saturating_sub(r), (i + r + 1).min(w));
            let s = sat[j1 * (w + 1) + i1] - sat[j0 * (w + 1) + i1] - sat[j1 * (w + 1) + i0]
                + sat[j0 * (w + 1) + i0];
            out.push(s as i32);
        }
    }
    out
}
