//! Detector scans: block-averaged intensity at detector resolution, with
//! optional photon-counting noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RealGrid};

/// Real intensity matrix at detector resolution. Pixel `(i, j)` is centered
/// where sample `(i, j)` of a grid with the same size and extent would be.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorScan {
    pub n_x: usize,
    pub n_y: usize,
    pub extent_x: f64,
    pub extent_y: f64,
    pub values: Vec<f64>,
}

impl DetectorScan {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n_x + i]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn cell_area(&self) -> f64 {
        (self.extent_x / self.n_x as f64) * (self.extent_y / self.n_y as f64)
    }

    /// Sum of values times pixel area.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    /// View the scan as an analysis grid (needs at least 16 pixels per axis).
    pub fn to_real_grid(&self) -> Result<RealGrid> {
        let g = GridSpec::new(self.n_x, self.n_y, self.extent_x, self.extent_y)?;
        RealGrid::new(g, self.values.clone())
    }
}

/// Block-average the whole grid down to `n_x x n_y` detector pixels.
pub fn detector_scan(intensity: &RealGrid, n_x: usize, n_y: usize) -> Result<DetectorScan> {
    let g = intensity.grid;
    detector_scan_window(intensity, n_x, n_y, g.extent_x, g.extent_y)
}

/// Block-average a centered window of `extent_x x extent_y` down to
/// `n_x x n_y` pixels. Partial overlaps are area-weighted and the grid is
/// treated as periodic, so a full-extent scan conserves the integral.
pub fn detector_scan_window(
    intensity: &RealGrid,
    n_x: usize,
    n_y: usize,
    extent_x: f64,
    extent_y: f64,
) -> Result<DetectorScan> {
    let g = intensity.grid;
    if n_x == 0 || n_y == 0 {
        return Err(Error::Domain("scan dimensions must be positive".into()));
    }
    if n_x > g.n_x || n_y > g.n_y {
        return Err(Error::Domain(format!(
            "scan {n_x}x{n_y} would upsample a {}x{} grid",
            g.n_x, g.n_y
        )));
    }
    let tol = 1e-12;
    if !(extent_x > 0.0 && extent_y > 0.0)
        || extent_x > g.extent_x * (1.0 + tol)
        || extent_y > g.extent_y * (1.0 + tol)
    {
        return Err(Error::Domain(format!(
            "scan window {extent_x:.3e} x {extent_y:.3e} m must be positive and fit the grid"
        )));
    }
    let (sx, sy) = (extent_x / n_x as f64, extent_y / n_y as f64);
    if sx < g.dx() * (1.0 - tol) || sy < g.dy() * (1.0 - tol) {
        return Err(Error::Domain(
            "scan pixels are finer than grid cells (upsampling)".into(),
        ));
    }
    let wx = overlap_weights(g.n_x, n_x, sx / g.dx());
    let wy = overlap_weights(g.n_y, n_y, sy / g.dy());

    let mut values = Vec::with_capacity(n_x * n_y);
    for row in &wy {
        let norm_y: f64 = row.iter().map(|&(_, w)| w).sum();
        for col in &wx {
            let norm_x: f64 = col.iter().map(|&(_, w)| w).sum();
            let mut acc = 0.0;
            for &(j, wj) in row {
                let mut line = 0.0;
                for &(i, wi) in col {
                    line += wi * intensity.at(i, j);
                }
                acc += wj * line;
            }
            values.push(acc / (norm_x * norm_y));
        }
    }
    Ok(DetectorScan {
        n_x,
        n_y,
        extent_x,
        extent_y,
        values,
    })
}

/// For each coarse cell, the fine cells it overlaps (wrapped) and the overlap
/// length in fine-cell units. `ratio` is the coarse pitch over the fine pitch.
fn overlap_weights(n_fine: usize, n_coarse: usize, ratio: f64) -> Vec<Vec<(usize, f64)>> {
    let half_fine = (n_fine / 2) as f64;
    (0..n_coarse)
        .map(|c| {
            // fine cell i spans [i - 1/2, i + 1/2] in index units
            let center = (c as f64 - (n_coarse / 2) as f64) * ratio + half_fine;
            let lo = center - 0.5 * ratio;
            let hi = center + 0.5 * ratio;
            let first = (lo + 0.5).floor() as i64;
            let last = (hi - 0.5).ceil() as i64;
            (first..=last)
                .filter_map(|i| {
                    let a = (i as f64 - 0.5).max(lo);
                    let b = (i as f64 + 0.5).min(hi);
                    (b > a).then(|| (i.rem_euclid(n_fine as i64) as usize, b - a))
                })
                .collect()
        })
        .collect()
}

/// Replace every pixel by a Poisson count whose mean is the pixel value
/// scaled so that the scan mean equals `mean_counts`. Deterministic in `seed`.
pub fn add_shot_noise(scan: &DetectorScan, mean_counts: f64, seed: u64) -> Result<DetectorScan> {
    if !(mean_counts > 0.0 && mean_counts.is_finite()) {
        return Err(Error::Domain(format!(
            "mean counts must be positive, got {mean_counts}"
        )));
    }
    let mean = scan.mean();
    if !(mean > 0.0) || scan.min() < 0.0 {
        return Err(Error::Domain(
            "shot noise needs a non-negative scan with positive mean".into(),
        ));
    }
    let scale = mean_counts / mean;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = scan
        .values
        .iter()
        .map(|&v| {
            let lambda = v * scale;
            if lambda > 0.0 {
                Poisson::new(lambda)
                    .map(|p| p.sample(&mut rng))
                    .map_err(|e| Error::Domain(format!("poisson rate {lambda}: {e}")))
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DetectorScan {
        values,
        ..scan.clone()
    })
}
