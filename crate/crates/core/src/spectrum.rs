//! Closed-form energy levels.
//!
//! The general formula covers any confining power potential; the four
//! per-model formulas add the Coulomb branch and the harmonic `|m'|`
//! convention. Three-dimensional levels use the field-free 2D formulas at
//! `m' = l + ½`.

use std::fmt;

use crate::ansatz::{self, SeriesSolution};
use crate::error::{Error, Result};
use crate::model::{derive_radial_params, FieldConfig, Model, ModelKind, PowerPotential};
use crate::units::Constants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dims {
    Two,
    Three,
}

/// Radial quantum number `n` with `m` (2D) or `l` (3D) in the second slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex {
    pub n: u32,
    pub m: i32,
    pub dims: Dims,
}

impl LevelIndex {
    pub fn two_d(n: u32, m: i32) -> Self {
        Self { n, m, dims: Dims::Two }
    }

    pub fn three_d(n: u32, l: i32) -> Result<Self> {
        if l < 0 {
            return Err(Error::domain(format!("l must be >= 0, got {l}")));
        }
        Ok(Self {
            n,
            m: l,
            dims: Dims::Three,
        })
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dims {
            Dims::Two => write!(f, "(n={}, m={})", self.n, self.m),
            Dims::Three => write!(f, "(n={}, l={})", self.n, self.m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    pub index: LevelIndex,
    pub energy: f64,
    pub mprime: f64,
    pub kind: ModelKind,
    pub field: FieldConfig,
}

/// Polynomial degree of radial level `n`: `2n` for the oscillator family,
/// `n` for the Coulomb family.
pub fn degree(kind: ModelKind, n: u32) -> u32 {
    if kind.is_oscillator() {
        2 * n
    } else {
        n
    }
}

/// `E = d + ½ħω_c m' + (ħ²/μ)γ(s + 1 + β) − (μ/2ħ²)b²/γ²` for polynomial
/// degree `s`. Requires `γ > 0`.
pub fn energy_general_2d(
    pot: &PowerPotential,
    field: &FieldConfig,
    s: u32,
    m: i32,
    mu: f64,
    units: &Constants,
) -> Result<f64> {
    let p = derive_radial_params(pot, field, m, mu, units)?;
    if p.coulomb_branch {
        return Err(Error::CoulombBranch);
    }
    let t = p.twomu;
    Ok(pot.d
        + 0.5 * p.hbar_omega_c * p.mprime
        + 2.0 * p.gamma / t * (s as f64 + 1.0 + p.beta)
        - 0.25 * t * pot.b * pot.b / (p.gamma * p.gamma))
}

// Per-model level as a function of the effective quantum number.
fn model_energy(model: &Model, hbar_omega_c: f64, mprime: f64, n: u32, t: f64) -> f64 {
    let n = n as f64;
    match *model {
        Model::Pseudoharmonic { de, re } => {
            let hw_d = 2.0 * (de / (t * re * re)).sqrt();
            let hw_big = (hbar_omega_c * hbar_omega_c + 4.0 * hw_d * hw_d).sqrt();
            let beta = (mprime * mprime + t * de * re * re).sqrt();
            -2.0 * de + hw_big * (n + 0.5 * (beta + 1.0)) + 0.5 * hbar_omega_c * mprime
        }
        Model::Harmonic { hbar_omega } => {
            let hw_big = (hbar_omega_c * hbar_omega_c + 4.0 * hbar_omega * hbar_omega).sqrt();
            hw_big * (n + 0.5 * (1.0 + mprime.abs())) + 0.5 * hbar_omega_c * mprime
        }
        Model::GeneralizedKratzer { de, re, eta } => {
            coulomb_energy(de, re, hbar_omega_c, mprime, n, t) + de + eta
        }
        Model::MieCoulombic { de, re } => coulomb_energy(de, re, hbar_omega_c, mprime, n, t),
    }
}

fn coulomb_energy(de: f64, re: f64, hbar_omega_c: f64, mprime: f64, n: f64, t: f64) -> f64 {
    let kk = t * de * re * re;
    let beta = (kk + mprime * mprime).sqrt();
    let x = n + 0.5 + beta;
    0.5 * hbar_omega_c * (mprime + n + 1.0 + beta) - kk * de / (x * x)
}

/// Level `(n, m)` of `model` in two dimensions with `field`.
pub fn energy_model_2d(
    model: &Model,
    field: &FieldConfig,
    n: u32,
    m: i32,
    mu: f64,
    units: &Constants,
) -> Result<f64> {
    let t = units.twomu_over_hbar2(mu)?;
    let hwc = units.cyclotron_energy(mu, field.b())?;
    let mprime = m as f64 + field.xi as f64;
    Ok(model_energy(model, hwc, mprime, n, t))
}

/// Field-free level `(n, l)` in three dimensions.
pub fn energy_model_3d(model: &Model, n: u32, l: i32, mu: f64, units: &Constants) -> Result<f64> {
    if l < 0 {
        return Err(Error::domain(format!("l must be >= 0, got {l}")));
    }
    let t = units.twomu_over_hbar2(mu)?;
    Ok(model_energy(model, 0.0, l as f64 + 0.5, n, t))
}

/// `E(m = +1) − E(m = −1)` at radial level `n`.
pub fn splitting(model: &Model, field: &FieldConfig, n: u32, mu: f64, units: &Constants) -> Result<f64> {
    Ok(energy_model_2d(model, field, n, 1, mu, units)? - energy_model_2d(model, field, n, -1, mu, units)?)
}

pub fn line(
    model: &Model,
    field: &FieldConfig,
    index: LevelIndex,
    mu: f64,
    units: &Constants,
) -> Result<SpectrumLine> {
    let (energy, mprime) = match index.dims {
        Dims::Two => (
            energy_model_2d(model, field, index.n, index.m, mu, units)?,
            index.m as f64 + field.xi as f64,
        ),
        Dims::Three => {
            if !field.is_field_free() {
                return Err(Error::domain("three-dimensional levels are field-free"));
            }
            (energy_model_3d(model, index.n, index.m, mu, units)?, index.m as f64 + 0.5)
        }
    };
    Ok(SpectrumLine {
        index,
        energy,
        mprime,
        kind: model.kind(),
        field: *field,
    })
}

/// Polynomial solution for 2D level `(n, m)`, at degree [`degree`]`(kind, n)`.
pub fn series_solution(
    model: &Model,
    field: &FieldConfig,
    n: u32,
    m: i32,
    mu: f64,
    units: &Constants,
) -> Result<SeriesSolution> {
    let pot = model.potential(mu, units)?;
    let params = derive_radial_params(&pot, field, m, mu, units)?;
    ansatz::solve_series(&params, degree(model.kind(), n))
}
