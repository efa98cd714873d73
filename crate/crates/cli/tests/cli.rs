use std::path::Path;
use std::process::{Command, Output};

fn molspec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molspec"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run molspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn calibrated_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["calibrate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

#[test]
fn table_one_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["table", "1", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("molecule,n,l,xi,B,E_eV\n"));
    assert_eq!(out.lines().count(), 85);
    let row = out.lines().find(|l| l.starts_with("N2,2,2,")).unwrap();
    let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - 0.54717177).abs() <= 5e-7);
}

#[test]
fn table_three_uses_minus_e() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&molspec(dir.path(), &["table", "3"]));
    let row = out.lines().find(|l| l.starts_with("CH,4,4,")).unwrap();
    let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - 3.25949862).abs() <= 1e-5);
}

#[test]
fn field_table_without_calibration_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["table", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("calibrate"));
}

#[test]
fn calibrate_then_tables_four_and_five_match() {
    let dir = calibrated_dir();
    let cfg = std::fs::read_to_string(dir.path().join("molspec.toml")).unwrap();
    assert!(cfg.contains("field_unit_kappa"));
    let t4 = stdout(&molspec(dir.path(), &["table", "4"]));
    let t5 = stdout(&molspec(dir.path(), &["table", "5"]));
    assert_eq!(t4, t5);
    let md = stdout(&molspec(dir.path(), &["table", "2", "--format", "md"]));
    assert!(md.contains("| n | m | E(xi=0, B=0) | E(xi=1, B=0) | E(xi=2, B=0) | E(xi=3, B=0) |"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = calibrated_dir();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = molspec(dir.path(), &["table", "2", "--output", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn compare_exit_codes() {
    let dir = calibrated_dir();
    assert_eq!(molspec(dir.path(), &["compare", "1"]).status.code(), Some(0));
    assert_eq!(molspec(dir.path(), &["compare", "2"]).status.code(), Some(0));

    // a registry with N2's De raised by 1%
    let reg = dir.path().join("reg.toml");
    let o = molspec(dir.path(), &["fit", "--output", reg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&reg).unwrap();
    let mut out = String::new();
    let mut in_n2 = false;
    for line in text.lines() {
        if line.starts_with('[') {
            in_n2 = line == "[N2]";
        }
        if in_n2 && line.starts_with("De_eV") {
            let v: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
            out.push_str(&format!("De_eV = {}\n", v * 1.01));
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    std::fs::write(&reg, out).unwrap();
    let o = molspec(dir.path(), &["--registry", reg.to_str().unwrap(), "compare", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("N2,") && l.ends_with("FAIL")));
}

#[test]
fn calibrate_rejects_zero_field_anchor() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["calibrate", "--b", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("molspec.toml").exists());
}

#[test]
fn validate_levels_zero_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["validate", "--levels", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "model,n,m,B,xi,closed_eV,oracle_eV,rel_err\n");
}

#[test]
fn validate_default_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 4 * 2 * 3 * 4);
    for line in out.lines().skip(1) {
        let rel: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(rel <= 1e-5, "{line}");
    }
}

#[test]
fn unknown_molecule_and_bad_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(dir.path(), &["validate", "--molecules", "XeF"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not found"));
    assert_eq!(molspec(dir.path(), &["table", "6"]).status.code(), Some(2));
    assert_eq!(molspec(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[constants]\nnonsense = 1\n").unwrap();
    let o = molspec(dir.path(), &["--config", bad.to_str().unwrap(), "table", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn wavefunction_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = molspec(
        dir.path(),
        &["wavefunction", "--model", "generalized-kratzer", "--molecule", "CH", "--n", "0", "--points", "2000"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("# degree s = 0, nodes = 0"));
    let samples: Vec<(f64, f64)> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("r_"))
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[2])
        })
        .collect();
    // trapezoid over the default range
    let integral: f64 = samples.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
    assert!((integral - 1.0).abs() < 1e-3, "{integral}");

    let o = molspec(
        dir.path(),
        &["wavefunction", "--model", "pseudoharmonic", "--molecule", "N2", "--n", "1", "--m", "-1"],
    );
    assert!(stdout(&o).contains("nodes = 1"));
}

#[test]
fn wavefunction_off_the_constraint_surface_fails() {
    let dir = calibrated_dir();
    let o = molspec(
        dir.path(),
        &["wavefunction", "--model", "generalized-kratzer", "--molecule", "N2", "--b", "1"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("constraint"));
}
