//! Simulation of orbital angular momentum transfer in stimulated parametric
//! down-conversion.
//!
//! A pump and an auxiliary Laguerre-Gauss beam drive a thin crystal; the idler
//! is proportional to `pump * conj(aux)`, so its topological charge is
//! `m_pump - m_aux`. The [`analysis`] module measures that charge three
//! independent ways: an azimuthal mode spectrum, the winding number of the
//! phase, and fork detection on a misaligned Michelson interferogram.
//!
//! ```
//! use spdc_oam::{synthesize_lg, stimulated_idler, oam_spectrum, CrystalConfig, GridSpec, LGModeSpec};
//!
//! let grid = GridSpec::square(128, 8e-3)?;
//! let pump = synthesize_lg(&LGModeSpec::new(1e-3, 1, 442e-9), &grid)?;
//! let aux = synthesize_lg(&LGModeSpec::new(1e-3, 0, 845e-9), &grid)?;
//! let idler = stimulated_idler(&pump, &aux, &CrystalConfig::default())?;
//! let spectrum = oam_spectrum(&idler, (0.0, 0.0), 4)?;
//! assert_eq!(spectrum.dominant_charge()?, 1);
//! # Ok::<(), spdc_oam::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod downconversion;
pub mod error;
mod fft;
pub mod field;
pub mod grid;
pub mod interferometer;
pub mod lg;
pub mod pgm;
pub mod propagation;
pub mod scan;
pub mod scenario;

pub use analysis::{
    detect_fork, dominant_charge, fringe_demodulate, oam_spectrum, winding_number, ForkReport,
    OAMSpectrum,
};
pub use downconversion::{
    expected_idler_charge, idler_wavelength, stimulated_idler, CrystalConfig,
};
pub use error::{Error, ErrorKind, Result};
pub use field::{conjugate_field, total_power, ComplexField};
pub use grid::{GridSpec, RealGrid};
pub use interferometer::{michelson_interferogram, shift_field, MichelsonConfig};
pub use lg::{synthesize_lg, LGModeSpec};
pub use pgm::{parse_pgm, to_grayscale_bitmap, Bitmap, GrayImage};
pub use propagation::{apply_thin_lens, propagate_angular_spectrum};
pub use rustfft::num_complex::Complex64;
pub use scan::{add_shot_noise, detector_scan, detector_scan_window, DetectorScan};
pub use scenario::{run_scenario, sweep, ScenarioConfig, ScenarioReport, ScenarioRun};
