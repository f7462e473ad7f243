use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use sndr_limiter::solver::{uniform_eta_closed_form, Branch};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sndr-limiter"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let prefix = format!("{key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn led_curve() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/led_curve.csv")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn solve_uniform_matches_closed_form() {
    let o = run(&["solve", "--dist", "uniform", "--dsnr-db", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let eta = field(&text, "eta_star");
    assert!((eta - uniform_eta_closed_form(0.1, Branch::Positive).unwrap()).abs() < 1e-8);
    for key in ["beta_star", "lower_knee", "upper_knee", "sndr_star", "sndr_star_db", "residual", "iterations"] {
        field(&text, key);
    }
}

#[test]
fn solve_gaussian_is_biased_at_midpoint() {
    let o = run(&["solve", "--dist", "gaussian", "--dsnr-db", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "beta_star") - 0.5).abs() < 1e-7);
}

#[test]
fn negative_branch_negates_gain() {
    let pos = field(&stdout(&run(&["solve", "--dist", "uniform", "--dsnr-db", "10"])), "eta_star");
    let o = run(&["solve", "--dist", "uniform", "--dsnr-db", "10", "--branch", "negative"]);
    assert_eq!(o.status.code(), Some(0));
    let neg = field(&stdout(&o), "eta_star");
    assert!((pos + neg).abs() < 1e-9);
}

#[test]
fn sweep_rows_are_ordered_and_capped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep",
        "--dist",
        "uniform",
        "--start-db",
        "0",
        "--stop-db",
        "40",
        "--step-db",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "dsnr_db,eta_star,beta_star,sndr_opt_db,sndr_g2_db,cap_lower,cap_upper");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 41);
    for r in rows {
        let v: Vec<f64> = r.iter().map(|c| c.parse().unwrap()).collect();
        let cap_db = v[0] - 10.0 * 4f64.log10();
        assert!(v[3] >= v[4], "{r:?}");
        assert!(v[3] <= cap_db + 1e-9, "{r:?}");
        assert!(v[5] <= v[6], "{r:?}");
    }
}

#[test]
fn sweep_is_byte_deterministic() {
    let args = [
        "sweep",
        "--dist",
        "gaussian",
        "--start-db",
        "-5",
        "--stop-db",
        "35",
        "--step-db",
        "2.5",
        "--log-base",
        "bits",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_rejects_bad_range() {
    assert_eq!(run(&["sweep", "--step-db", "0"]).status.code(), Some(3));
    assert_eq!(run(&["sweep", "--start-db", "10", "--stop-db", "0"]).status.code(), Some(3));
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(run(&["solve", "--dist", "cauchy", "--dsnr-db", "10"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--dist", "file:/nonexistent.csv", "--dsnr-db", "10"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--dist", "uniform", "--dsnr-db", "ten"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--dist", "uniform", "--dsnr-db", "10", "--branch", "up"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn tabulated_input_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    // triangle on [−√6, √6], already standardized
    let a = 6f64.sqrt();
    writeln!(f, "gamma,density").unwrap();
    for i in 0..=8 {
        let x = -a + a * i as f64 / 4.0;
        writeln!(f, "{x},{}", (a - x.abs()) / (a * a)).unwrap();
    }
    let spec = format!("file:{}", f.path().display());
    let o = run(&["solve", "--dist", &spec, "--dsnr-db", "15"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((field(&stdout(&o), "beta_star") - 0.5).abs() < 1e-7);
}

#[test]
fn sndr_of_full_range_affine_is_zero_db() {
    let dsnr = format!("{}", 10.0 * 12f64.log10());
    let slope = format!("affine:{},0.5", 1.0 / (2.0 * 3f64.sqrt()));
    let o = run(&["sndr", "--dist", "uniform", "--dsnr-db", &dsnr, "--mapping", &slope]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(field(&stdout(&o), "sndr_db").abs() < 1e-9);
}

#[test]
fn capacity_units() {
    let nats = stdout(&run(&["capacity", "--dsnr-db", "20"]));
    let bits = stdout(&run(&["capacity", "--dsnr-db", "20", "--log-base", "bits"]));
    for key in ["lower", "upper"] {
        let (n, b) = (field(&nats, key), field(&bits, key));
        assert!((b - n / std::f64::consts::LN_2).abs() < 1e-12);
    }
    let g2 = stdout(&run(&["capacity", "--dsnr-db", "20", "--mapping", "g2"]));
    assert!(field(&g2, "lower") < field(&nats, "lower"));
}

#[test]
fn predistort_led_curve() {
    let o = run(&["predistort", "--dist", "gaussian", "--dsnr-db", "20", "--device", led_curve().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = field(&stderr(&o), "composition_error");
    assert!(err < 1e-3, "{err}");
    let rows = csv_rows(&stdout(&o));
    assert!(rows.len() >= 257);
}

#[test]
fn predistort_square_law_device() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "drive,output").unwrap();
    for i in 0..=200 {
        let v = i as f64 / 200.0;
        writeln!(f, "{v},{}", v * v).unwrap();
    }
    let o = run(&[
        "predistort",
        "--dist",
        "uniform",
        "--dsnr-db",
        "10",
        "--points",
        "65",
        "--device",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let eta = uniform_eta_closed_form(0.1, Branch::Positive).unwrap();
    for r in csv_rows(&stdout(&o)) {
        let (gamma, drive): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let g = (gamma / eta + 0.5).clamp(0.0, 1.0);
        assert!((drive - g.sqrt()).abs() < 1e-4, "{gamma}: {drive} vs {}", g.sqrt());
    }
}

#[test]
fn predistort_rejects_non_monotone_device() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "drive,output\n0,0\n0.5,0.7\n0.6,0.6\n1,1").unwrap();
    let o = run(&["predistort", "--dsnr-db", "10", "--device", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_grid_passes() {
    let o = run(&["oracle", "--dist", "uniform", "--dsnr-db", "10", "--suite", "grid"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("kind,magnitude,baseline,perturbed,delta\n"));
}

#[test]
fn oracle_perturb_is_reproducible() {
    let args = ["oracle", "--dist", "gaussian", "--dsnr-db", "10", "--suite", "perturb", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stderr(&a).contains("seed: 7"));
}

#[test]
fn oracle_full_suite_on_gaussian() {
    let o = run(&["oracle", "--dist", "gaussian", "--dsnr-db", "20", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for kind in ["grid", "into_lower", "into_upper", "half_line", "bump", "montecarlo"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{kind},"))), "no {kind} rows");
    }
}
