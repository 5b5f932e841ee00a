//! Thin-crystal stimulated down-conversion.
//!
//! With spontaneous emission neglected and all beams evaluated in the same
//! transverse plane, the stimulated idler is the pump times the conjugated
//! seed: `E_i = gain * E_p * conj(E_s)`. Conjugation of the seed is what makes
//! charges subtract: `m_i = m_p - m_s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ComplexField;

/// BBO crystal length of the reference setup (m).
pub const DEFAULT_CRYSTAL_LENGTH: f64 = 3e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalConfig {
    /// Effective nonlinear coupling times crystal length (dimensionless).
    pub gain: f64,
    /// Carried as metadata; the thin-crystal model does not depend on it.
    pub crystal_length: f64,
}

impl Default for CrystalConfig {
    fn default() -> Self {
        CrystalConfig {
            gain: 1.0,
            crystal_length: DEFAULT_CRYSTAL_LENGTH,
        }
    }
}

impl CrystalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain > 0.0 && self.gain.is_finite()) {
            return Err(Error::Domain(format!(
                "gain must be positive, got {}",
                self.gain
            )));
        }
        if !(self.crystal_length > 0.0 && self.crystal_length.is_finite()) {
            return Err(Error::Domain(format!(
                "crystal length must be positive, got {}",
                self.crystal_length
            )));
        }
        Ok(())
    }
}

/// Charge left for the idler by `m_p = m_s + m_i`.
pub fn expected_idler_charge(pump_charge: i32, signal_charge: i32) -> i32 {
    pump_charge - signal_charge
}

/// Energy conservation `1/lambda_i = 1/lambda_p - 1/lambda_s`.
pub fn idler_wavelength(pump: f64, signal: f64) -> Result<f64> {
    if !(pump > 0.0 && pump.is_finite() && signal.is_finite()) {
        return Err(Error::Domain(format!(
            "wavelengths must be positive and finite, got pump {pump}, signal {signal}"
        )));
    }
    if signal <= pump {
        return Err(Error::Domain(format!(
            "signal wavelength {signal} must exceed pump wavelength {pump}"
        )));
    }
    Ok(pump * signal / (signal - pump))
}

pub fn stimulated_idler(
    pump: &ComplexField,
    aux: &ComplexField,
    cfg: &CrystalConfig,
) -> Result<ComplexField> {
    cfg.validate()?;
    pump.check_same_grid(aux)?;
    let lambda_i = idler_wavelength(pump.wavelength(), aux.wavelength())?;
    let amplitude = pump
        .amplitude()
        .iter()
        .zip(aux.amplitude())
        .map(|(p, s)| p * s.conj() * cfg.gain)
        .collect();
    Ok(pump.with_amplitude(amplitude).with_wavelength(lambda_i))
}
