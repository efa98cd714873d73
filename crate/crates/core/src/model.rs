//! Interaction potentials, external fields and the radial reduction.
//!
//! Every built-in molecular model is a special case of the power form
//! `V(r) = a r² + b r + d − g/r + k/r²`. Together with a field
//! configuration and a magnetic quantum number it reduces to the
//! index-free [`RadialParams`] consumed by the series ansatz and the
//! finite-difference oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Constants;

/// Coefficients of `V(r) = a r² + b r + d − g/r + k/r²` in eV and Å.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerPotential {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub g: f64,
    pub k: f64,
}

impl PowerPotential {
    pub fn eval(&self, r: f64) -> f64 {
        self.a * r * r + self.b * r + self.d - self.g / r + self.k / (r * r)
    }
}

/// Uniform field strength `b_field` (field units) and Aharonov–Bohm flux
/// `xi` in integer flux quanta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct FieldConfig {
    pub b_field: Field,
    pub xi: i32,
}

/// Field strength stored as an exact multiple of 1/1000 field unit so the
/// configuration can be hashed and compared exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct Field(i64);

impl Field {
    pub const ZERO: Field = Field(0);

    pub fn new(b: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::domain(format!("field must be finite and >= 0, got {b}")));
        }
        let milli = (b * 1000.0).round();
        if (milli / 1000.0 - b).abs() > 1e-9 * b.max(1.0) {
            return Err(Error::domain(format!("field {b} is not a multiple of 0.001")));
        }
        Ok(Field(milli as i64))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FieldConfig {
    pub const FREE: FieldConfig = FieldConfig {
        b_field: Field::ZERO,
        xi: 0,
    };

    pub fn new(b: f64, xi: i32) -> Result<Self> {
        Ok(Self {
            b_field: Field::new(b)?,
            xi,
        })
    }

    pub fn b(&self) -> f64 {
        self.b_field.value()
    }

    pub fn is_field_free(&self) -> bool {
        self.b_field.is_zero() && self.xi == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Pseudoharmonic,
    Harmonic,
    GeneralizedKratzer,
    MieCoulombic,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Pseudoharmonic,
        ModelKind::Harmonic,
        ModelKind::GeneralizedKratzer,
        ModelKind::MieCoulombic,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Pseudoharmonic => "pseudoharmonic",
            ModelKind::Harmonic => "harmonic",
            ModelKind::GeneralizedKratzer => "generalized-kratzer",
            ModelKind::MieCoulombic => "mie-coulombic",
        }
    }

    /// Oscillator-family potentials couple polynomial coefficients two
    /// steps apart, so radial level `n` has degree `2n`; the Coulomb family
    /// has degree `n`.
    pub fn is_oscillator(self) -> bool {
        matches!(self, ModelKind::Pseudoharmonic | ModelKind::Harmonic)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pseudoharmonic" | "pseudo-harmonic" => Ok(ModelKind::Pseudoharmonic),
            "harmonic" => Ok(ModelKind::Harmonic),
            "generalized-kratzer" | "kratzer" => Ok(ModelKind::GeneralizedKratzer),
            "mie-coulombic" | "mie" => Ok(ModelKind::MieCoulombic),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

/// A molecular model together with its constants.
///
/// Energies are in eV and lengths in Å. The harmonic oscillator is
/// parametrized by its quantum `ħω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Pseudoharmonic { de: f64, re: f64 },
    Harmonic { hbar_omega: f64 },
    GeneralizedKratzer { de: f64, re: f64, eta: f64 },
    MieCoulombic { de: f64, re: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be > 0, got {v}")))
    }
}

impl Model {
    pub fn pseudoharmonic(de: f64, re: f64) -> Result<Self> {
        check_positive("D_e", de)?;
        check_positive("r_e", re)?;
        Ok(Model::Pseudoharmonic { de, re })
    }

    pub fn harmonic(hbar_omega: f64) -> Result<Self> {
        check_positive("hbar*omega", hbar_omega)?;
        Ok(Model::Harmonic { hbar_omega })
    }

    pub fn generalized_kratzer(de: f64, re: f64, eta: f64) -> Result<Self> {
        check_positive("D_e", de)?;
        check_positive("r_e", re)?;
        if !eta.is_finite() {
            return Err(Error::domain("eta must be finite"));
        }
        Ok(Model::GeneralizedKratzer { de, re, eta })
    }

    /// Generalized Kratzer with `η = −D_e`, the Kratzer–Fues form used
    /// for the rovibrational tables.
    pub fn kratzer(de: f64, re: f64) -> Result<Self> {
        Self::generalized_kratzer(de, re, -de)
    }

    pub fn mie_coulombic(de: f64, re: f64) -> Result<Self> {
        check_positive("D_e", de)?;
        check_positive("r_e", re)?;
        Ok(Model::MieCoulombic { de, re })
    }

    /// Builds the model of `kind` for a molecule with dissociation energy
    /// `de`, equilibrium distance `re` and reduced mass `mu`. The harmonic
    /// oscillator takes the pseudoharmonic well frequency
    /// `ω_D = √(2D_e/μr_e²)`; the generalized Kratzer takes `η = −D_e`.
    pub fn for_molecule(
        kind: ModelKind,
        de: f64,
        re: f64,
        mu: f64,
        units: &Constants,
    ) -> Result<Self> {
        match kind {
            ModelKind::Pseudoharmonic => Self::pseudoharmonic(de, re),
            ModelKind::Harmonic => {
                check_positive("D_e", de)?;
                check_positive("r_e", re)?;
                let t = units.twomu_over_hbar2(mu)?;
                Self::harmonic(2.0 * (de / (t * re * re)).sqrt())
            }
            ModelKind::GeneralizedKratzer => Self::kratzer(de, re),
            ModelKind::MieCoulombic => Self::mie_coulombic(de, re),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Pseudoharmonic { .. } => ModelKind::Pseudoharmonic,
            Model::Harmonic { .. } => ModelKind::Harmonic,
            Model::GeneralizedKratzer { .. } => ModelKind::GeneralizedKratzer,
            Model::MieCoulombic { .. } => ModelKind::MieCoulombic,
        }
    }

    /// Power-form coefficients. Only the harmonic oscillator needs the
    /// mass, through `a = μω²/2`.
    pub fn potential(&self, mu: f64, units: &Constants) -> Result<PowerPotential> {
        let pot = match *self {
            Model::Pseudoharmonic { de, re } => PowerPotential {
                a: de / (re * re),
                d: -2.0 * de,
                k: de * re * re,
                ..Default::default()
            },
            Model::Harmonic { hbar_omega } => {
                let t = units.twomu_over_hbar2(mu)?;
                PowerPotential {
                    a: hbar_omega * hbar_omega * t / 4.0,
                    ..Default::default()
                }
            }
            Model::GeneralizedKratzer { de, re, eta } => PowerPotential {
                d: de + eta,
                g: 2.0 * re * de,
                k: re * re * de,
                ..Default::default()
            },
            Model::MieCoulombic { de, re } => PowerPotential {
                g: 2.0 * re * de,
                k: re * re * de,
                ..Default::default()
            },
        };
        Ok(pot)
    }
}

/// Parses a model tag and builds the model for the given molecule constants.
pub fn make_potential(
    tag: &str,
    de: f64,
    re: f64,
    mu: f64,
    units: &Constants,
) -> Result<PowerPotential> {
    let kind: ModelKind = tag.parse()?;
    Model::for_molecule(kind, de, re, mu, units)?.potential(mu, units)
}

/// Index-free radial parameters of the reduced equation
/// `R'' + (−ε² − γ²r² + g'/r − b'r − (β² − ¼)/r²) R = 0`.
///
/// Primed quantities are scaled by `2μ/ħ²` (stored as `twomu`). On the
/// Coulomb branch (`γ = 0`) the damping parameter `q` depends on the
/// polynomial degree; `q` then holds the degree-0 value and
/// [`RadialParams::at_degree`] supplies the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialParams {
    pub mprime: f64,
    pub beta: f64,
    pub gamma: f64,
    pub aprime: f64,
    pub bprime: f64,
    pub dprime: f64,
    pub gprime: f64,
    pub kprime: f64,
    pub p: f64,
    pub q: f64,
    pub coulomb_branch: bool,
    pub hbar_omega_c: f64,
    pub mu: f64,
    pub twomu: f64,
}

impl RadialParams {
    /// `q = −g'/(2s + 2β + 1)` on the Coulomb branch.
    pub fn coulomb_q(&self, s: u32) -> f64 {
        -self.gprime / (2.0 * s as f64 + 2.0 * self.beta + 1.0)
    }

    /// Copy with `q` resolved for polynomial degree `s`. Identity off the
    /// Coulomb branch.
    pub fn at_degree(&self, s: u32) -> RadialParams {
        if self.coulomb_branch {
            RadialParams {
                q: self.coulomb_q(s),
                ..*self
            }
        } else {
            *self
        }
    }

    /// Additive energy offset `d + ½ħω_c m'` in eV.
    pub fn energy_offset(&self) -> f64 {
        self.dprime / self.twomu + 0.5 * self.hbar_omega_c * self.mprime
    }
}

/// Reduces `pot` in `field` with magnetic quantum number `m` and mass `mu`
/// (amu) to radial parameters.
pub fn derive_radial_params(
    pot: &PowerPotential,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    units: &Constants,
) -> Result<RadialParams> {
    derive_radial_params_mprime(pot, field, (m as f64) + field.xi as f64, mu, units)
}

/// As [`derive_radial_params`] but with the effective quantum number
/// `m' = m + ξ` given directly, which admits the half-integer values used
/// by the three-dimensional substitution.
pub fn derive_radial_params_mprime(
    pot: &PowerPotential,
    field: &FieldConfig,
    mprime: f64,
    mu: f64,
    units: &Constants,
) -> Result<RadialParams> {
    let twomu = units.twomu_over_hbar2(mu)?;
    let hbar_omega_c = units.cyclotron_energy(mu, field.b())?;

    let aprime = twomu * pot.a;
    let bprime = twomu * pot.b;
    let dprime = twomu * pot.d;
    let gprime = twomu * pot.g;
    let kprime = twomu * pot.k;

    let beta2 = kprime + mprime * mprime;
    assert!(
        beta2 >= 0.0,
        "k' + m'^2 = {beta2} < 0; inverse-square coefficient k = {} is too attractive",
        pot.k
    );
    let beta = beta2.sqrt();

    // μω_c/2ħ = (2μ/ħ²)·ħω_c/4
    let larmor = twomu * hbar_omega_c / 4.0;
    let gamma2 = aprime + larmor * larmor;
    if gamma2 < 0.0 {
        return Err(Error::AntiConfining { gamma2 });
    }
    let gamma = gamma2.sqrt();

    let (p, q, coulomb_branch) = if gamma > 0.0 {
        (-gamma, -bprime / (2.0 * gamma), false)
    } else {
        if pot.g <= 0.0 {
            return Err(Error::NoBoundSpectrum);
        }
        if pot.b != 0.0 {
            return Err(Error::domain("linear term b requires gamma > 0"));
        }
        (0.0, -gprime / (2.0 * beta + 1.0), true)
    };

    Ok(RadialParams {
        mprime,
        beta,
        gamma,
        aprime,
        bprime,
        dprime,
        gprime,
        kprime,
        p,
        q,
        coulomb_branch,
        hbar_omega_c,
        mu,
        twomu,
    })
}
