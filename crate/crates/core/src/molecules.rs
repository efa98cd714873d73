//! Spectroscopic constants for NO, CO, N₂ and CH and the fit that recovers
//! them from tabulated 3D pseudoharmonic levels.
//!
//! Those levels depend on `(D_e, r_e, μ)` only through `D_e` and
//! `K = 2μD_e r_e²/ħ²`, so `μ` comes from standard atomic weights and the
//! fit solves for `D_e` and `r_e`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::spectrum::energy_model_3d;
use crate::units::Constants;
use crate::ModelKind;

/// Largest residual (eV) a fitted constant set may leave on its own rows.
pub const FIT_RESIDUAL_TOL: f64 = 1e-7;
pub const FIT_MAX_ITERATIONS: usize = 200;

const BUILTIN_REGISTRY: &str = include_str!("../data/registry.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FittedFromTable,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeConstants {
    pub name: String,
    /// Dissociation energy, eV.
    #[serde(rename = "De_eV")]
    pub de: f64,
    /// Equilibrium separation, Å.
    #[serde(rename = "re_angstrom")]
    pub re: f64,
    /// Reduced mass, amu.
    #[serde(rename = "mu_amu")]
    pub mu: f64,
    pub provenance: Provenance,
}

impl MoleculeConstants {
    pub fn new(name: &str, de: f64, re: f64, mu: f64, provenance: Provenance) -> Result<Self> {
        let c = Self {
            name: name.to_string(),
            de,
            re,
            mu,
            provenance,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidRegistry {
            name: self.name.clone(),
            reason,
        };
        if self.name.is_empty() {
            return Err(bad("empty name".into()));
        }
        for (key, v) in [("De_eV", self.de), ("re_angstrom", self.re), ("mu_amu", self.mu)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{key} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// The model of `kind` built from these constants.
    pub fn model(&self, kind: ModelKind, units: &Constants) -> Result<Model> {
        Model::for_molecule(kind, self.de, self.re, self.mu, units)
    }
}

impl fmt::Display for MoleculeConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: De = {} eV, re = {} Å, mu = {} amu",
            self.name, self.de, self.re, self.mu
        )
    }
}

/// Standard atomic weight (amu) of H, C, N or O.
pub fn atomic_weight(symbol: &str) -> Option<f64> {
    match symbol {
        "H" => Some(1.008),
        "C" => Some(12.011),
        "N" => Some(14.007),
        "O" => Some(15.999),
        _ => None,
    }
}

/// Reduced mass of a diatomic given as a formula such as `N2`, `CH` or `NO`.
pub fn reduced_mass(formula: &str) -> Result<f64> {
    let mut atoms = Vec::new();
    let chars: Vec<char> = formula.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_uppercase() {
            let mut sym = c.to_string();
            if i + 1 < chars.len() && chars[i + 1].is_ascii_lowercase() {
                sym.push(chars[i + 1]);
                i += 1;
            }
            let w = atomic_weight(&sym)
                .ok_or_else(|| Error::domain(format!("unknown element `{sym}` in `{formula}`")))?;
            atoms.push(w);
        } else if c == '2' && atoms.len() == 1 {
            atoms.push(atoms[0]);
        } else {
            return Err(Error::domain(format!("cannot parse diatomic formula `{formula}`")));
        }
        i += 1;
    }
    match atoms[..] {
        [m1, m2] => Ok(m1 * m2 / (m1 + m2)),
        _ => Err(Error::domain(format!("`{formula}` is not a diatomic formula"))),
    }
}

/// One tabulated 3D level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitRow {
    pub n: u32,
    pub l: u32,
    pub energy: f64,
}

fn level(de: f64, re: f64, row: &FitRow, mu: f64, units: &Constants) -> Result<f64> {
    energy_model_3d(&Model::pseudoharmonic(de, re)?, row.n, row.l as i32, mu, units)
}

// Residuals and the Jacobian with respect to (ln De, ln re).
fn linearize(
    x: [f64; 2],
    rows: &[FitRow],
    mu: f64,
    t: f64,
    units: &Constants,
) -> Result<(Vec<f64>, Vec<[f64; 2]>)> {
    let (de, re) = (x[0].exp(), x[1].exp());
    if !(de > 0.0 && re > 0.0 && de.is_finite() && re.is_finite()) {
        return Err(Error::NonPhysicalFit(format!("De = {de}, re = {re}")));
    }
    let a = (de / (t * re * re)).sqrt();
    let k = t * de * re * re;
    let mut res = Vec::with_capacity(rows.len());
    let mut jac = Vec::with_capacity(rows.len());
    for row in rows {
        res.push(level(de, re, row, mu, units)? - row.energy);
        let lam = row.l as f64 + 0.5;
        let beta = (lam * lam + k).sqrt();
        let w = 2.0 * row.n as f64 + 1.0 + beta;
        jac.push([-2.0 * de + a * w + a * k / beta, -2.0 * a * w + 2.0 * a * k / beta]);
    }
    Ok((res, jac))
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|r| r * r).sum()
}

/// Fits `D_e` and `r_e` to three or more distinct `(n, l)` rows of the 3D
/// pseudoharmonic spectrum at fixed reduced mass `mu`.
///
/// A coarse scan over `D_e ∈ [1, 20]` eV and `r_e ∈ [0.8, 1.5]` Å seeds a
/// Levenberg–Marquardt iteration in `(ln D_e, ln r_e)`.
pub fn fit_constants(name: &str, rows: &[FitRow], mu: f64, units: &Constants) -> Result<MoleculeConstants> {
    let mut keys: Vec<(u32, u32)> = rows.iter().map(|r| (r.n, r.l)).collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() < 3 || keys.len() != rows.len() {
        return Err(Error::domain(format!(
            "fit needs at least three distinct (n, l) rows, got {} rows with {} distinct",
            rows.len(),
            keys.len()
        )));
    }
    if rows.iter().any(|r| !r.energy.is_finite()) {
        return Err(Error::domain("fit rows must have finite energies"));
    }
    let t = units.twomu_over_hbar2(mu)?;

    let mut x = [0.0, 0.0];
    let mut best = f64::INFINITY;
    const SCAN: usize = 48;
    for i in 0..SCAN {
        let lde = 1f64.ln() + (20f64.ln() - 1f64.ln()) * i as f64 / (SCAN - 1) as f64;
        for j in 0..SCAN {
            let lre = 0.8f64.ln() + (1.5f64.ln() - 0.8f64.ln()) * j as f64 / (SCAN - 1) as f64;
            let (res, _) = linearize([lde, lre], rows, mu, t, units)?;
            let ss = sum_sq(&res);
            if ss < best {
                best = ss;
                x = [lde, lre];
            }
        }
    }

    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let (mut res, mut jac) = linearize(x, rows, mu, t, units)?;
    let mut cost = sum_sq(&res);
    while iterations < FIT_MAX_ITERATIONS {
        iterations += 1;
        let mut jtj = [[0.0; 2]; 2];
        let mut jtr = [0.0; 2];
        for (r, j) in res.iter().zip(&jac) {
            for a in 0..2 {
                jtr[a] += j[a] * r;
                for b in 0..2 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut accepted = false;
        while lambda < 1e16 {
            let m = [
                [jtj[0][0] * (1.0 + lambda), jtj[0][1]],
                [jtj[1][0], jtj[1][1] * (1.0 + lambda)],
            ];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let step = [
                -(m[1][1] * jtr[0] - m[0][1] * jtr[1]) / det,
                -(m[0][0] * jtr[1] - m[1][0] * jtr[0]) / det,
            ];
            let trial = [x[0] + step[0], x[1] + step[1]];
            let (tres, tjac) = linearize(trial, rows, mu, t, units)?;
            let tcost = sum_sq(&tres);
            if tcost <= cost {
                let small = step[0].abs().max(step[1].abs()) < 1e-15;
                x = trial;
                res = tres;
                jac = tjac;
                cost = tcost;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                converged = small;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted || converged {
            converged = true;
            break;
        }
    }

    let rms = (cost / rows.len() as f64).sqrt();
    let max_res = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if !converged || max_res > FIT_RESIDUAL_TOL {
        return Err(Error::FitNonConvergence { iterations, rms });
    }
    let (de, re) = (x[0].exp(), x[1].exp());
    if !(de.is_finite() && re.is_finite() && de > 0.0 && re > 0.0) {
        return Err(Error::NonPhysicalFit(format!("De = {de}, re = {re}")));
    }
    MoleculeConstants::new(name, de, re, mu, Provenance::FittedFromTable)
}

/// Constants keyed by molecule name, stored as TOML with one section per
/// molecule.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    molecules: BTreeMap<String, MoleculeConstants>,
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_REGISTRY, Path::new("data/registry.toml"))
            .expect("embedded registry is valid")
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let molecules: BTreeMap<String, MoleculeConstants> =
            toml::from_str(text).map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                message: e.to_string(),
            })?;
        let mut reg = Registry::default();
        for (key, c) in molecules {
            if key != c.name {
                return Err(Error::InvalidRegistry {
                    name: key,
                    reason: format!("section name does not match name = \"{}\"", c.name),
                });
            }
            reg.insert(c)?;
        }
        Ok(reg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(&self.molecules).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Adds or replaces an entry after validating it.
    pub fn insert(&mut self, c: MoleculeConstants) -> Result<()> {
        c.validate()?;
        self.molecules.insert(c.name.clone(), c);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&MoleculeConstants> {
        self.molecules
            .get(name)
            .ok_or_else(|| Error::MoleculeNotFound(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &MoleculeConstants> {
        self.molecules.values()
    }

    pub fn len(&self) -> usize {
        self.molecules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.molecules.is_empty()
    }
}
