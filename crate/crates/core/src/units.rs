//! Laboratory ↔ natural-unit conversion.
//!
//! Natural units here mean ħ = c = 1 with lengths in cm and energies,
//! frequencies and wave numbers all in cm⁻¹.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{positive, Result};

/// Speed of light, cm/s.
pub const C_CM_PER_S: f64 = 2.997_924_58e10;

/// Energy conversion, cm⁻¹ per joule.
pub const J_TO_INVCM: f64 = 5.0341e22;

pub const NM_TO_CM: f64 = 1e-7;
pub const FS_TO_S: f64 = 1e-15;

/// Fine-structure constant.
pub const ALPHA_FS: f64 = 1.0 / 137.035_999;

/// Laboratory pulse description plus the derived natural-unit values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseParams {
    /// W/cm²
    pub intensity_lab: f64,
    /// nm
    pub wavelength_lab: f64,
    /// fs
    pub duration_lab: f64,
    /// cm²
    pub spot_area_lab: f64,
    /// Central angular frequency 2π/λ, cm⁻¹.
    pub omega0: f64,
    /// Pulse length c·τ, cm.
    pub tau_nat: f64,
    /// Total pulse energy I·S·τ, cm⁻¹.
    pub pulse_energy_nat: f64,
}

/// Laboratory quantities recovered from a [`PulseParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabPulse {
    pub intensity: f64,
    pub wavelength: f64,
    pub duration: f64,
    pub spot_area: f64,
}

/// Converts laboratory pulse parameters (W/cm², nm, fs, cm²) to natural units.
pub fn to_natural(intensity: f64, wavelength: f64, duration: f64, spot: f64) -> Result<PulseParams> {
    let intensity = positive("intensity", intensity)?;
    let wavelength = positive("wavelength", wavelength)?;
    let duration = positive("duration", duration)?;
    let spot = positive("spot", spot)?;

    let duration_s = duration * FS_TO_S;
    Ok(PulseParams {
        intensity_lab: intensity,
        wavelength_lab: wavelength,
        duration_lab: duration,
        spot_area_lab: spot,
        omega0: 2.0 * PI / (wavelength * NM_TO_CM),
        tau_nat: C_CM_PER_S * duration_s,
        pulse_energy_nat: intensity * spot * duration_s * J_TO_INVCM,
    })
}

impl PulseParams {
    /// Pulse energy in joules.
    pub fn pulse_energy_joules(&self) -> f64 {
        self.pulse_energy_nat / J_TO_INVCM
    }

    /// Inverse conversion, reading only the derived natural-unit fields
    /// (and the spot area, which has no natural-unit counterpart).
    pub fn to_lab(&self) -> LabPulse {
        let duration_s = self.tau_nat / C_CM_PER_S;
        LabPulse {
            intensity: self.pulse_energy_nat / J_TO_INVCM / (self.spot_area_lab * duration_s),
            wavelength: 2.0 * PI / self.omega0 / NM_TO_CM,
            duration: duration_s / FS_TO_S,
            spot_area: self.spot_area_lab,
        }
    }

    /// Same pulse with a different intensity.
    pub fn with_intensity(&self, intensity: f64) -> Result<Self> {
        to_natural(intensity, self.wavelength_lab, self.duration_lab, self.spot_area_lab)
    }

    /// Same pulse with a different duration.
    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        to_natural(self.intensity_lab, self.wavelength_lab, duration, self.spot_area_lab)
    }
}
