//! Physical constants and the eV / Å / amu unit system.
//!
//! Every other module works in these units: energies in eV, lengths in Å
//! and masses in atomic mass units. The only non-standard quantity is the
//! field unit used for `B`, which carries no SI meaning of its own and is
//! fixed by calibration against a single tabulated level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħc in eV·Å (CODATA 2018).
pub const HBAR_C_EV_ANGSTROM: f64 = 1973.269804;

/// One unified atomic mass unit in eV/c² (CODATA 2018).
pub const AMU_EV: f64 = 931.494_102_42e6;

/// Constants shared by every calculation.
///
/// `field_unit_kappa` converts a field strength to a cyclotron energy via
/// `ħω_c = κ·B/μ` (κ in eV·amu per field unit). It stays `None` until
/// calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(rename = "hbar_c_eV_angstrom")]
    pub hbar_c: f64,
    #[serde(rename = "amu_eV")]
    pub amu_in_ev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_unit_kappa: Option<f64>,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            hbar_c: HBAR_C_EV_ANGSTROM,
            amu_in_ev: AMU_EV,
            field_unit_kappa: None,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_c.is_finite() && self.hbar_c > 0.0) {
            return Err(Error::domain(format!("hbar_c must be > 0, got {}", self.hbar_c)));
        }
        if !(self.amu_in_ev.is_finite() && self.amu_in_ev > 0.0) {
            return Err(Error::domain(format!(
                "amu_in_eV must be > 0, got {}",
                self.amu_in_ev
            )));
        }
        if let Some(kappa) = self.field_unit_kappa {
            if !(kappa.is_finite() && kappa >= 0.0) {
                return Err(Error::domain(format!("field_unit_kappa must be >= 0, got {kappa}")));
            }
        }
        Ok(())
    }

    /// Returns a copy with the field unit set.
    pub fn with_field_unit_kappa(self, kappa: f64) -> Result<Self> {
        let out = Self {
            field_unit_kappa: Some(kappa),
            ..self
        };
        out.validate()?;
        Ok(out)
    }

    /// 2μ/ħ² in Å⁻²·eV⁻¹ for a mass given in amu.
    pub fn twomu_over_hbar2(&self, mu: f64) -> Result<f64> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::domain(format!("mass must be > 0, got {mu}")));
        }
        Ok(2.0 * mu * self.amu_in_ev / (self.hbar_c * self.hbar_c))
    }

    /// Cyclotron energy ħω_c in eV for mass `mu` (amu) and field `b` (field units).
    pub fn cyclotron_energy(&self, mu: f64, b: f64) -> Result<f64> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::domain(format!("mass must be > 0, got {mu}")));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::domain(format!("field must be >= 0, got {b}")));
        }
        if b == 0.0 {
            return Ok(0.0);
        }
        let kappa = self.field_unit_kappa.ok_or(Error::Uncalibrated)?;
        Ok(kappa * b / mu)
    }
}
