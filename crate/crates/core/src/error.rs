use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("field unit is not calibrated; run `molspec calibrate` first")]
    Uncalibrated,

    #[error("unknown model `{0}` (expected pseudoharmonic, harmonic, generalized-kratzer or mie-coulombic)")]
    UnknownModel(String),

    #[error("gamma = 0 and g <= 0: the potential has no bound spectrum")]
    NoBoundSpectrum,

    #[error("potential is anti-confining (gamma^2 = {gamma2:e} < 0)")]
    AntiConfining { gamma2: f64 },

    #[error("gamma = 0: use the Coulomb-branch model formula")]
    CoulombBranch,

    #[error("parameters violate the quasi-exactness constraint for degree {degree} (residual {residual:e})")]
    ConstraintViolated { degree: u32, residual: f64 },

    #[error("series solution does not decay at large r")]
    NonDecaying,

    #[error("wavefunction tail not negligible at r_max = {r_max} (|R|^2 ratio {ratio:e})")]
    TailNotNegligible { r_max: f64, ratio: f64 },

    #[error("quadrature did not reach the requested accuracy (error estimate {0:e})")]
    Quadrature(f64),

    #[error("eigensolver did not converge: {0}")]
    Eigensolver(String),

    #[error("grid too coarse: levels on h and h/2 disagree by {rel:e} (relative)")]
    GridTooCoarse { rel: f64 },

    #[error("fit did not converge after {iterations} iterations (rms residual {rms:e} eV)")]
    FitNonConvergence { iterations: usize, rms: f64 },

    #[error("fit produced a non-physical root: {0}")]
    NonPhysicalFit(String),

    #[error("molecule `{0}` not found in registry")]
    MoleculeNotFound(String),

    #[error("invalid registry entry `{name}`: {reason}")]
    InvalidRegistry { name: String, reason: String },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("reference table {0} does not exist (expected 1-5)")]
    UnknownTable(u8),

    #[error("reference data: {0}")]
    Reference(String),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("failed to serialize: {0}")]
    Serialize(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
