//! Finite-difference eigenvalues of the radial equation, used as an
//! independent check on the closed-form spectrum.
//!
//! The solver sees only a [`PowerPotential`] and a [`FieldConfig`]. It
//! discretizes `−(ħ²/2μ)(1/r)(r u')' + W(r)u = Eu` in flux form on a
//! cell-centred grid `r_i = (i − ½)h`, where `W = V_eff + ħ²/(8μr²)` and
//! `R = √r·u`. The first cell face sits at the origin and carries zero
//! flux; `u` vanishes one cell beyond `r_max`. Symmetrizing with `√r_i`
//! gives a real symmetric tridiagonal matrix.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{derive_radial_params, FieldConfig, Model, ModelKind, PowerPotential};
use crate::spectrum;
use crate::tridiag::SymTridiagonal;
use crate::units::Constants;

pub const MIN_POINTS: usize = 500;
pub const DEFAULT_POINTS: usize = 4000;
pub const MAX_LEVELS: usize = 10;
/// Energies below this magnitude (eV) are compared absolutely.
pub const REL_ERR_FLOOR: f64 = 1e-6;
/// Relative disagreement between the `h` and `h/2` grids that marks a
/// grid as too coarse.
pub const COARSE_GRID_REL: f64 = 1e-3;

const SIZING_POINTS: usize = 1000;
// ∫κ dr past the outer turning point of the highest level; |u|² falls by e^(−2·DECAY).
const DECAY: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    points: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, points: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::domain(format!("r_max must be > 0, got {r_max}")));
        }
        if points < MIN_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_POINTS} points, got {points}"
            )));
        }
        Ok(Self { r_max, points })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / self.points as f64
    }

    pub fn r_min(&self) -> f64 {
        0.5 * self.spacing()
    }

    /// Centre of cell `i` (0-based).
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }

    /// Same extent, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            r_max: self.r_max,
            points: 2 * self.points,
        }
    }
}

/// `V_eff(r) = V(r) + (μω_c²/8)r² + (ħ²/2μ)(m'² − ¼)/r² + ½ħω_c m'`, the
/// potential seen by `R(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePotential {
    pot: PowerPotential,
    hbar_omega_c: f64,
    mprime: f64,
    twomu: f64,
}

impl EffectivePotential {
    pub fn eval(&self, r: f64) -> f64 {
        let t = self.twomu;
        let w = self.hbar_omega_c;
        self.pot.eval(r)
            + t * w * w * r * r / 16.0
            + (self.mprime * self.mprime - 0.25) / (t * r * r)
            + 0.5 * w * self.mprime
    }

    /// Potential seen by `u(r) = R(r)/√r` in the flux-form operator.
    fn u_form(&self, r: f64) -> f64 {
        self.eval(r) + 0.25 / (self.twomu * r * r)
    }
}

pub fn effective_potential(
    pot: &PowerPotential,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    units: &Constants,
) -> Result<EffectivePotential> {
    // only for its confinement checks
    derive_radial_params(pot, field, m, mu, units)?;
    Ok(EffectivePotential {
        pot: *pot,
        hbar_omega_c: units.cyclotron_energy(mu, field.b())?,
        mprime: m as f64 + field.xi as f64,
        twomu: units.twomu_over_hbar2(mu)?,
    })
}

fn assemble(veff: &EffectivePotential, grid: &RadialGrid) -> Result<SymTridiagonal> {
    let n = grid.points();
    let h = grid.spacing();
    let k = 1.0 / (veff.twomu * h * h);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n {
        let r = grid.node(i);
        let face_in = i as f64 * h;
        let face_out = (i + 1) as f64 * h;
        diag.push(k * (face_in + face_out) / r + veff.u_form(r));
        if i + 1 < n {
            off.push(-k * face_out / (r * grid.node(i + 1)).sqrt());
        }
    }
    SymTridiagonal::new(diag, off)
}

/// Lowest `count` eigenvalues (eV) on `grid`, ascending.
pub fn fd_eigenvalues(
    pot: &PowerPotential,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    grid: &RadialGrid,
    count: usize,
    units: &Constants,
) -> Result<Vec<f64>> {
    if count > MAX_LEVELS {
        return Err(Error::domain(format!("at most {MAX_LEVELS} levels, got {count}")));
    }
    let veff = effective_potential(pot, field, m, mu, units)?;
    let levels = assemble(&veff, grid)?.lowest(count)?;
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Eigensolver("levels are not strictly increasing".into()));
    }
    Ok(levels)
}

/// Levels on `h` and `h/2` and their Richardson extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct FdLevels {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

pub fn richardson_levels(
    pot: &PowerPotential,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    grid: &RadialGrid,
    count: usize,
    units: &Constants,
) -> Result<FdLevels> {
    let coarse = fd_eigenvalues(pot, field, m, mu, grid, count, units)?;
    let fine = fd_eigenvalues(pot, field, m, mu, &grid.refined(), count, units)?;
    let mut extrapolated = Vec::with_capacity(count);
    for (c, f) in coarse.iter().zip(&fine) {
        let rel = (c - f).abs() / f.abs().max(REL_ERR_FLOOR);
        if rel > COARSE_GRID_REL {
            return Err(Error::GridTooCoarse { rel });
        }
        extrapolated.push((4.0 * f - c) / 3.0);
    }
    Ok(FdLevels {
        coarse,
        fine,
        extrapolated,
    })
}

/// Picks `r_max` from the potential alone: the box must extend
/// [`DECAY`] WKB decay lengths past the outer turning point of the
/// highest requested level, estimated on a coarse grid and iterated.
pub fn auto_grid(
    pot: &PowerPotential,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    count: usize,
    points: usize,
    units: &Constants,
) -> Result<RadialGrid> {
    let veff = effective_potential(pot, field, m, mu, units)?;
    let count = count.max(1);

    let mut r_star = 1e-4;
    let mut w_star = f64::INFINITY;
    for i in 0..=1600 {
        let r = 10f64.powf(-4.0 + 8.0 * i as f64 / 1600.0);
        let w = veff.u_form(r);
        if w < w_star {
            w_star = w;
            r_star = r;
        }
    }

    let mut r_max = 2.0 * r_star;
    for _ in 0..60 {
        let grid = RadialGrid::new(r_max, SIZING_POINTS)?;
        let top = *assemble(&veff, &grid)?.lowest(count)?.last().expect("count >= 1");

        const SCAN: usize = 4096;
        let turning = (1..=SCAN)
            .rev()
            .map(|j| r_max * j as f64 / SCAN as f64)
            .find(|&r| veff.u_form(r) < top);
        let r_turn = match turning {
            Some(r) if r < 0.95 * r_max => r,
            _ => {
                r_max *= 2.0;
                continue;
            }
        };

        let dr = r_turn * 1e-3;
        let mut acc = 0.0;
        let mut r = r_turn;
        while acc < DECAY {
            let kappa = (veff.twomu * (veff.u_form(r + 0.5 * dr) - top).max(0.0)).sqrt();
            acc += kappa * dr;
            r += dr;
            if r > 1e4 * r_turn {
                return Err(Error::domain("potential does not confine the requested levels"));
            }
        }
        let r_new = 1.05 * r;
        if (r_new - r_max).abs() <= 0.1 * r_max {
            return RadialGrid::new(r_new, points);
        }
        r_max = r_new;
    }
    Err(Error::domain("could not size the radial grid"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub kind: ModelKind,
    pub n: u32,
    pub m: i32,
    pub field: FieldConfig,
    pub closed: f64,
    pub fd: f64,
    pub richardson: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.rel_err))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("model,n,m,B,xi,closed_eV,oracle_eV,rel_err\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.10},{:.10},{:.3e}",
                r.kind,
                r.n,
                r.m,
                r.field.b_field,
                r.field.xi,
                r.closed,
                r.richardson,
                r.rel_err
            );
        }
        s
    }
}

/// Compares the lowest `levels` closed-form energies of `model` at fixed
/// `m` with Richardson-extrapolated finite-difference eigenvalues.
pub fn validate_spectrum(
    model: &Model,
    field: &FieldConfig,
    m: i32,
    mu: f64,
    levels: usize,
    units: &Constants,
) -> Result<OracleReport> {
    if levels == 0 {
        return Ok(OracleReport::default());
    }
    let pot = model.potential(mu, units)?;
    let grid = auto_grid(&pot, field, m, mu, levels, DEFAULT_POINTS, units)?;
    let fd = richardson_levels(&pot, field, m, mu, &grid, levels, units)?;
    let mut rows = Vec::with_capacity(levels);
    for n in 0..levels {
        let closed = spectrum::energy_model_2d(model, field, n as u32, m, mu, units)?;
        let richardson = fd.extrapolated[n];
        rows.push(OracleRow {
            kind: model.kind(),
            n: n as u32,
            m,
            field: *field,
            closed,
            fd: fd.fine[n],
            richardson,
            rel_err: (closed - richardson).abs() / closed.abs().max(REL_ERR_FLOOR),
        });
    }
    Ok(OracleReport { rows })
}

/// One `(model, field, m)` block of a validation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationCase {
    pub model: Model,
    pub field: FieldConfig,
    pub m: i32,
    pub mu: f64,
}

/// Runs every case in parallel and concatenates the reports in input order.
pub fn validate_cases(cases: &[ValidationCase], levels: usize, units: &Constants) -> Result<OracleReport> {
    let parts: Vec<Result<OracleReport>> = cases
        .par_iter()
        .map(|c| validate_spectrum(&c.model, &c.field, c.m, c.mu, levels, units))
        .collect();
    let mut rows = Vec::new();
    for p in parts {
        rows.extend(p?.rows);
    }
    Ok(OracleReport { rows })
}
