//! Sampling of the transverse plane.
//!
//! Sample `(i, j)` sits at `x = (i - n_x/2) * dx`, `y = (j - n_y/2) * dy`
//! with integer division, so the origin is always a sample and the grid is
//! treated as one period of a periodic plane by every FFT-based operation.
//! Storage is row-major with `j` (y) as the slow index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_GRID_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_x: usize,
    pub n_y: usize,
    pub extent_x: f64,
    pub extent_y: f64,
}

impl GridSpec {
    pub fn new(n_x: usize, n_y: usize, extent_x: f64, extent_y: f64) -> Result<Self> {
        let grid = GridSpec {
            n_x,
            n_y,
            extent_x,
            extent_y,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn square(n: usize, extent: f64) -> Result<Self> {
        Self::new(n, n, extent, extent)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x < MIN_GRID_SAMPLES || self.n_y < MIN_GRID_SAMPLES {
            return Err(Error::Sampling(format!(
                "grid {}x{} is below the minimum of {MIN_GRID_SAMPLES} samples per axis",
                self.n_x, self.n_y
            )));
        }
        if !(self.extent_x > 0.0 && self.extent_y > 0.0)
            || !self.extent_x.is_finite()
            || !self.extent_y.is_finite()
        {
            return Err(Error::Domain(format!(
                "grid extents must be positive and finite, got {} x {}",
                self.extent_x, self.extent_y
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.extent_x / self.n_x as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.extent_y / self.n_y as f64
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_x * self.n_y
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - (self.n_x / 2) as f64) * self.dx()
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - (self.n_y / 2) as f64) * self.dy()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_x + i
    }

    /// Continuous sample coordinates of a physical point (inverse of `x`/`y`).
    #[inline]
    pub fn to_fractional(&self, x: f64, y: f64) -> (f64, f64) {
        (
            x / self.dx() + (self.n_x / 2) as f64,
            y / self.dy() + (self.n_y / 2) as f64,
        )
    }

    /// Nearest sample to a physical point, if it lies on the grid.
    pub fn nearest(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let (fi, fj) = self.to_fractional(x, y);
        let (i, j) = (fi.round(), fj.round());
        if i < 0.0 || j < 0.0 || i >= self.n_x as f64 || j >= self.n_y as f64 {
            return None;
        }
        Some((i as usize, j as usize))
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n_x - 1)
    }

    pub fn y_min(&self) -> f64 {
        self.y(0)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.n_y - 1)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min() && x <= self.x_max() && y >= self.y_min() && y <= self.y_max()
    }

    /// Angular spatial frequency (rad/m) of FFT bin `k` along x, in FFT order.
    pub fn kx(&self, k: usize) -> f64 {
        fft_frequency(k, self.n_x) * std::f64::consts::TAU / self.extent_x
    }

    pub fn ky(&self, k: usize) -> f64 {
        fft_frequency(k, self.n_y) * std::f64::consts::TAU / self.extent_y
    }

    /// Spectral bin widths (rad/m).
    pub fn dk(&self) -> (f64, f64) {
        (
            std::f64::consts::TAU / self.extent_x,
            std::f64::consts::TAU / self.extent_y,
        )
    }

    /// Nyquist angular frequencies (rad/m).
    pub fn k_nyquist(&self) -> (f64, f64) {
        (
            std::f64::consts::PI / self.dx(),
            std::f64::consts::PI / self.dy(),
        )
    }
}

/// Signed integer frequency of FFT bin `k` for an `n`-point transform.
#[inline]
pub(crate) fn fft_frequency(k: usize, n: usize) -> f64 {
    if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// A real-valued map on a grid: intensities, wrapped phases, scans.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl RealGrid {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Geometry(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n_x,
                grid.n_y
            )));
        }
        Ok(RealGrid { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        RealGrid {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.n_y {
            let y = grid.y(j);
            for i in 0..grid.n_x {
                values.push(f(grid.x(i), y));
            }
        }
        RealGrid { grid, values }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
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

    /// Sum of values weighted by the cell area.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn scaled(&self, c: f64) -> Self {
        RealGrid {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Reflection `x -> -x` on the periodic grid (`i -> (n - i) mod n`).
    pub fn mirror_x(&self) -> Self {
        let g = self.grid;
        let mut values = vec![0.0; g.len()];
        for j in 0..g.n_y {
            for i in 0..g.n_x {
                values[g.index((g.n_x - i) % g.n_x, j)] = self.at(i, j);
            }
        }
        RealGrid { grid: g, values }
    }

    /// Intensity-weighted centroid (x, y).
    pub fn centroid(&self) -> Option<(f64, f64)> {
        let g = self.grid;
        let (mut s, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for j in 0..g.n_y {
            for i in 0..g.n_x {
                let v = self.at(i, j);
                s += v;
                sx += v * g.x(i);
                sy += v * g.y(j);
            }
        }
        (s > 0.0).then(|| (sx / s, sy / s))
    }

    /// Largest absolute difference relative to the largest absolute value of `self`.
    pub fn max_relative_difference(&self, other: &RealGrid) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}
