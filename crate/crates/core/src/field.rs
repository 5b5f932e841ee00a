//! Sampled complex scalar fields.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RealGrid};

/// A monochromatic transverse amplitude on a grid. Units are arbitrary;
/// `|a|^2` summed over the grid and multiplied by the cell area is the power.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    wavelength: f64,
    amplitude: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, wavelength: f64, amplitude: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if amplitude.len() != grid.len() {
            return Err(Error::Geometry(format!(
                "{} samples for a {}x{} grid",
                amplitude.len(),
                grid.n_x,
                grid.n_y
            )));
        }
        Ok(ComplexField {
            grid,
            wavelength,
            amplitude,
        })
    }

    pub fn zeros(grid: GridSpec, wavelength: f64) -> Result<Self> {
        Self::new(grid, wavelength, vec![Complex64::default(); grid.len()])
    }

    pub fn from_fn(
        grid: GridSpec,
        wavelength: f64,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut amplitude = Vec::with_capacity(grid.len());
        for j in 0..grid.n_y {
            let y = grid.y(j);
            for i in 0..grid.n_x {
                amplitude.push(f(grid.x(i), y));
            }
        }
        Self::new(grid, wavelength, amplitude)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.amplitude[self.grid.index(i, j)]
    }

    pub(crate) fn with_amplitude(&self, amplitude: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitude.len(), self.amplitude.len());
        ComplexField {
            grid: self.grid,
            wavelength: self.wavelength,
            amplitude,
        }
    }

    pub(crate) fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = wavelength;
        self
    }

    pub fn map(&self, mut f: impl FnMut(f64, f64, Complex64) -> Complex64) -> Self {
        let g = self.grid;
        let mut out = Vec::with_capacity(g.len());
        for j in 0..g.n_y {
            let y = g.y(j);
            for i in 0..g.n_x {
                out.push(f(g.x(i), y, self.at(i, j)));
            }
        }
        self.with_amplitude(out)
    }

    /// `sum |a|^2 * cell area`.
    pub fn total_power(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn conjugate(&self) -> Self {
        self.with_amplitude(self.amplitude.iter().map(|a| a.conj()).collect())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.with_amplitude(self.amplitude.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &ComplexField) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(self.with_amplitude(
            self.amplitude
                .iter()
                .zip(&other.amplitude)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// `sum a * conj(b) * cell area`.
    pub fn inner_product(&self, other: &ComplexField) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.cell_area())
    }

    pub fn intensity(&self) -> RealGrid {
        RealGrid {
            grid: self.grid,
            values: self.amplitude.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Principal-value phase in (-pi, pi].
    pub fn phase(&self) -> RealGrid {
        RealGrid {
            grid: self.grid,
            values: self
                .amplitude
                .iter()
                .map(|a| principal_value(a.arg()))
                .collect(),
        }
    }

    /// Reflection `x -> -x` on the periodic grid.
    pub fn mirror_x(&self) -> Self {
        let g = self.grid;
        let mut out = vec![Complex64::default(); g.len()];
        for j in 0..g.n_y {
            for i in 0..g.n_x {
                out[g.index((g.n_x - i) % g.n_x, j)] = self.at(i, j);
            }
        }
        self.with_amplitude(out)
    }

    /// Reflection `y -> -y` on the periodic grid.
    pub fn mirror_y(&self) -> Self {
        let g = self.grid;
        let mut out = vec![Complex64::default(); g.len()];
        for j in 0..g.n_y {
            for i in 0..g.n_x {
                out[g.index(i, (g.n_y - j) % g.n_y)] = self.at(i, j);
            }
        }
        self.with_amplitude(out)
    }

    /// Counter-clockwise rotation by 90 degrees about the origin. Requires a
    /// square grid.
    pub fn rotate_quarter_turn(&self) -> Result<Self> {
        let g = self.grid;
        if g.n_x != g.n_y || g.extent_x != g.extent_y {
            return Err(Error::Geometry("quarter-turn needs a square grid".into()));
        }
        let n = g.n_x;
        let h = (n / 2) as isize;
        let mut out = vec![Complex64::default(); g.len()];
        // new(x, y) = old(y, -x)
        for j in 0..n {
            for i in 0..n {
                let (u, v) = (i as isize - h, j as isize - h);
                let src_i = (v + h).rem_euclid(n as isize) as usize;
                let src_j = (-u + h).rem_euclid(n as isize) as usize;
                out[g.index(i, j)] = self.at(src_i, src_j);
            }
        }
        Ok(self.with_amplitude(out))
    }

    pub(crate) fn check_same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Geometry(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`ComplexField::total_power`].
pub fn total_power(f: &ComplexField) -> f64 {
    f.total_power()
}

/// Pointwise complex conjugate; intensity is unchanged and charges flip sign.
pub fn conjugate_field(f: &ComplexField) -> ComplexField {
    f.conjugate()
}

/// Map an angle to (-pi, pi].
#[inline]
pub fn principal_value(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::square(32, 1.0).unwrap()
    }

    #[test]
    fn power_of_zero_field_is_zero() {
        let f = ComplexField::zeros(grid(), 1e-6).unwrap();
        assert_eq!(f.total_power(), 0.0);
    }

    #[test]
    fn power_scales_quadratically() {
        let f = ComplexField::from_fn(grid(), 1e-6, |x, y| {
            Complex64::new((-(x * x + y * y) * 20.0).exp(), x)
        })
        .unwrap();
        let p = f.total_power();
        let p2 = f.scaled(Complex64::new(2.0, 0.0)).total_power();
        assert!((p2 - 4.0 * p).abs() < 1e-12 * p2);
    }

    #[test]
    fn conjugation_is_an_involution_and_fixes_real_fields() {
        let f = ComplexField::from_fn(grid(), 1e-6, Complex64::new).unwrap();
        assert_eq!(f.conjugate().conjugate(), f);
        assert_eq!(f.conjugate().intensity(), f.intensity());
        let r = ComplexField::from_fn(grid(), 1e-6, |x, y| Complex64::new(x - y, 0.0)).unwrap();
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn rejects_bad_wavelength_and_length() {
        assert!(matches!(
            ComplexField::zeros(grid(), 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ComplexField::new(grid(), 1.0, vec![Complex64::default(); 3]),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn principal_value_range() {
        assert_eq!(principal_value(PI), PI);
        assert_eq!(principal_value(-PI), PI);
        assert!((principal_value(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((principal_value(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_maps_x_axis_to_y_axis() {
        let g = grid();
        let f = ComplexField::from_fn(g, 1e-6, |x, y| Complex64::new(x, 2.0 * y)).unwrap();
        let r = f.rotate_quarter_turn().unwrap();
        // new(x, y) = old(y, -x) = (y, -2x)
        for j in 1..32 {
            for i in 1..32 {
                let e = Complex64::new(g.y(j), -2.0 * g.x(i));
                assert!((r.at(i, j) - e).norm() < 1e-12);
            }
        }
        let four = r
            .rotate_quarter_turn()
            .and_then(|f| f.rotate_quarter_turn())
            .and_then(|f| f.rotate_quarter_turn())
            .unwrap();
        assert_eq!(four, f);
    }
}
