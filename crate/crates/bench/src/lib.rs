//! Fixtures shared by the benchmarks.

use molspec_core::{Constants, MoleculeConstants, Registry};

/// The built-in registry with a field unit set, so field-dependent
/// tables can be regenerated.
pub fn setup() -> (Registry, Constants) {
    let units = Constants::default()
        .with_field_unit_kappa(3.967_619_46e-5)
        .expect("positive field unit");
    (Registry::builtin(), units)
}

pub fn molecule(reg: &Registry, name: &str) -> MoleculeConstants {
    reg.get(name).expect("molecule in built-in registry").clone()
}
