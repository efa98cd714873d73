//! `molspec`: regenerate and check the energy tables, calibrate the field
//! unit, validate against the finite-difference oracle and sample
//! wavefunctions.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use molspec_core::oracle::{validate_cases, ValidationCase};
use molspec_core::tables::{self, Anchor, Wavefunction};
use molspec_core::{Config, FieldConfig, ModelKind, Registry};

/// Largest relative oracle error `validate` accepts.
const VALIDATE_TOL: f64 = 1e-5;

#[derive(Debug, Parser)]
#[command(name = "molspec", version, about = "Quasi-exact molecular spectra in magnetic and AB flux fields")]
struct Cli {
    /// Molecule registry (TOML); the built-in fitted registry when omitted.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    /// Constants file holding the calibrated field unit.
    #[arg(long, global = true, default_value = "molspec.toml")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regenerate one of the five energy tables.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Diff a regenerated table against the embedded reference values.
    /// Exits with status 1 when any scored entry is out of tolerance.
    Compare {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Fit the field unit to one tabulated pseudoharmonic level and store it
    /// in the config file.
    Calibrate {
        #[arg(long, default_value = "N2")]
        molecule: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Target energy in eV; defaults to the table 2 entry for the anchor.
        #[arg(long)]
        energy: Option<f64>,
    },
    /// Compare closed-form levels with the finite-difference oracle.
    Validate {
        #[arg(long, value_delimiter = ',', default_value = "pseudoharmonic,harmonic,generalized-kratzer,mie-coulombic")]
        models: Vec<ModelKind>,
        #[arg(long, value_delimiter = ',', default_value = "N2,CH")]
        molecules: Vec<String>,
        /// Number of radial levels per (model, molecule, m), starting at n = 0.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,-1", allow_hyphen_values = true)]
        m: Vec<i32>,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        xi: i32,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sample the normalized radial function u(r) of a solvable level.
    Wavefunction {
        #[arg(long)]
        model: ModelKind,
        #[arg(long)]
        molecule: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i32,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        xi: i32,
        /// Sampling range in angstrom; defaults to (0, r_norm] where r_norm
        /// is the normalization range.
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Refit the registry from table 1 rows and write it out.
    Fit {
        /// Rows as n:l pairs.
        #[arg(long, value_delimiter = ',', default_value = "0:0,5:0,5:5")]
        rows: Vec<String>,
        #[arg(long, short)]
        output: PathBuf,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_row(s: &str) -> Result<(u32, u32)> {
    let (n, l) = s.split_once(':').with_context(|| format!("row `{s}` is not of the form n:l"))?;
    Ok((n.trim().parse()?, l.trim().parse()?))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let registry = match &cli.registry {
        Some(p) => Registry::load(p)?,
        None => Registry::builtin(),
    };
    let config = Config::load_or_default(&cli.config)?;
    let units = config.constants;

    match cli.command {
        Command::Table { id, format, output } => {
            let table = tables::regenerate(id, &registry, &units)?;
            let text = match format {
                Format::Csv => table.to_csv(),
                Format::Md => table.to_markdown(),
            };
            emit(&text, output.as_deref())?;
        }
        Command::Compare { id, output } => {
            let report = tables::compare(id, &registry, &units)?;
            emit(&report.to_csv(), output.as_deref())?;
            eprintln!("{}", report.summary());
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Calibrate {
            molecule,
            n,
            m,
            b,
            energy,
        } => {
            let field = FieldConfig::new(b, 0)?;
            let energy = match energy {
                Some(e) => e,
                None => molspec_core::reference::reference_table(2)?
                    .find(&molecule, n, m, &field)
                    .map(|r| r.energy())
                    .with_context(|| format!("table 2 has no entry for {molecule} n={n} m={m} B={b}"))?,
            };
            let anchor = Anchor {
                molecule,
                n,
                m,
                field,
                energy,
            };
            let kappa = tables::calibrate(&anchor, &registry, &units)?;
            let updated = Config {
                constants: units.with_field_unit_kappa(kappa)?,
            };
            updated.save(&cli.config)?;
            println!("field_unit_kappa = {kappa:e}");
            eprintln!("saved to {}", cli.config.display());
        }
        Command::Validate {
            models,
            molecules,
            levels,
            m,
            b,
            xi,
            output,
        } => {
            let field = FieldConfig::new(b, xi)?;
            let mut cases = Vec::new();
            for name in &molecules {
                let c = registry.get(name)?;
                for &kind in &models {
                    for &mm in &m {
                        cases.push(ValidationCase {
                            model: c.model(kind, &units)?,
                            field,
                            m: mm,
                            mu: c.mu,
                        });
                    }
                }
            }
            let report = validate_cases(&cases, levels, &units)?;
            emit(&report.to_csv(), output.as_deref())?;
            eprintln!(
                "{} levels, max relative error {:.3e}",
                report.rows.len(),
                report.max_rel_err()
            );
            if report.max_rel_err() > VALIDATE_TOL {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Wavefunction {
            model,
            molecule,
            n,
            m,
            b,
            xi,
            r_min,
            r_max,
            points,
            output,
        } => {
            let c = registry.get(&molecule)?;
            let field = FieldConfig::new(b, xi)?;
            let wf = Wavefunction::new(model, c, n, m, &field, None, &units)?;
            let hi = r_max.unwrap_or(wf.r_max);
            let lo = r_min.unwrap_or(hi / points.max(1) as f64);
            emit(&wf.to_csv(lo, hi, points)?, output.as_deref())?;
        }
        Command::Fit { rows, output } => {
            let keys = rows.iter().map(|s| parse_row(s)).collect::<Result<Vec<_>>>()?;
            if keys.is_empty() {
                bail!("no rows given");
            }
            let fitted = tables::fit_registry(&keys, &units)?;
            fitted.save(&output)?;
            for c in fitted.iter() {
                eprintln!("{c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
