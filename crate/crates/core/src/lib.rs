//! Quasi-exact bound states of power-law molecular potentials in a uniform
//! magnetic field and an Aharonov–Bohm flux.

pub mod ansatz;
pub mod config;
pub mod error;
pub mod model;
pub mod molecules;
pub mod oracle;
pub mod quad;
pub mod reference;
pub mod spectrum;
pub mod tables;
pub mod tridiag;
pub mod units;

pub use ansatz::SeriesSolution;
pub use config::Config;
pub use error::{Error, Result};
pub use model::{FieldConfig, Model, ModelKind, PowerPotential, RadialParams};
pub use molecules::{MoleculeConstants, Provenance, Registry};
pub use oracle::OracleReport;
pub use reference::{ReferenceRow, ReferenceTable};
pub use spectrum::{LevelIndex, SpectrumLine};
pub use tables::{CompareReport, Table};
pub use units::Constants;
