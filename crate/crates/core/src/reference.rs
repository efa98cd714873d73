//! Tabulated reference energies, transcribed at 8 decimals.
//!
//! Tables 1 and 2 list `E`; Tables 3–5 list `−E`. Rows keep the printed
//! decimal and [`ReferenceRow::energy`] applies the sign.

use std::collections::HashSet;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::FieldConfig;

const REFERENCE_CSV: &str = include_str!("../data/reference_tables.csv");

pub const TABLE_IDS: [u8; 5] = [1, 2, 3, 4, 5];

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub molecule: String,
    pub n: u32,
    /// `m` in the 2D tables, `l` in the 3D ones.
    pub m: i32,
    pub field: FieldConfig,
    /// The value as printed.
    pub printed: f64,
    pub negated: bool,
}

impl ReferenceRow {
    /// Energy in eV with the table's sign convention undone.
    pub fn energy(&self) -> f64 {
        if self.negated {
            -self.printed
        } else {
            self.printed
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub id: u8,
    /// True when the table prints `−E`.
    pub negated: bool,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    /// Whether the table lists 3D `(n, l)` levels.
    pub fn is_three_d(&self) -> bool {
        matches!(self.id, 1 | 3)
    }

    pub fn molecules(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.molecule) {
                out.push(r.molecule.clone());
            }
        }
        out
    }

    pub fn find(&self, molecule: &str, n: u32, m: i32, field: &FieldConfig) -> Option<&ReferenceRow> {
        self.rows
            .iter()
            .find(|r| r.molecule == molecule && r.n == n && r.m == m && r.field == *field)
    }
}

#[derive(Debug, Deserialize)]
struct Record {
    table: u8,
    molecule: String,
    n: u32,
    q: i32,
    xi: i32,
    b: f64,
    value: f64,
}

fn is_negated(id: u8) -> bool {
    id >= 3
}

/// Parses reference CSV text with header `table,molecule,n,q,xi,b,value`.
pub fn parse_reference_csv(text: &str) -> Result<Vec<ReferenceTable>> {
    let mut tables: Vec<ReferenceTable> = TABLE_IDS
        .iter()
        .map(|&id| ReferenceTable {
            id,
            negated: is_negated(id),
            rows: Vec::new(),
        })
        .collect();
    let mut seen = HashSet::new();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for (i, rec) in reader.deserialize::<Record>().enumerate() {
        let rec = rec.map_err(|e| Error::Reference(format!("record {}: {e}", i + 1)))?;
        let table = tables
            .iter_mut()
            .find(|t| t.id == rec.table)
            .ok_or(Error::UnknownTable(rec.table))?;
        let field = FieldConfig::new(rec.b, rec.xi)?;
        if !seen.insert((rec.table, rec.molecule.clone(), rec.n, rec.q, field)) {
            return Err(Error::Reference(format!(
                "duplicate entry in table {}: {} n={} m={} xi={} B={}",
                rec.table, rec.molecule, rec.n, rec.q, rec.xi, rec.b
            )));
        }
        table.rows.push(ReferenceRow {
            molecule: rec.molecule,
            n: rec.n,
            m: rec.q,
            field,
            printed: rec.value,
            negated: table.negated,
        });
    }
    Ok(tables)
}

/// All five embedded tables.
pub fn reference_tables() -> Vec<ReferenceTable> {
    parse_reference_csv(REFERENCE_CSV).expect("embedded reference data is valid")
}

pub fn reference_table(id: u8) -> Result<ReferenceTable> {
    reference_tables()
        .into_iter()
        .find(|t| t.id == id)
        .ok_or(Error::UnknownTable(id))
}
