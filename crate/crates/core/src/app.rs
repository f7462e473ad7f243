//! Building blocks for the command-line tool: argument value types, the
//! DSNR sweep, and the oracle suites. Everything here writes to generic
//! `Write` sinks so it can be driven from tests or other programs.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::capacity::{rate_from_sndr, sndr_cap, upper_bound, LogBase};
use crate::dist::{load_tabulated_pdf, InputDistribution};
use crate::error::{Error, Result};
use crate::mapping::{bussgang, from_db, NonlinearMapping};
use crate::oracle::{
    grid_search, monte_carlo_sndr, random_slivers, stationarity_fit, Grid, OracleRow, SetCase, OPTIMALITY_TOL,
};
use crate::predistort::{composition_error, predistort_curve, DeviceCurve, PredistortionLut};
use crate::solver::{solve_general, solve_symmetric, Branch, SolveOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::BracketFailure { .. } | Error::InconsistentParams(_) => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

/// `t = σv²/A² = 10^(−DSNR_dB/10)`
pub fn noise_ratio_from_db(dsnr_db: f64) -> f64 {
    1.0 / from_db(dsnr_db)
}

/// `uniform`, `gaussian`, or `file:<path>` to a `gamma,density` CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Uniform,
    Gaussian,
    File(PathBuf),
}

impl FromStr for DistSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(DistSpec::Uniform),
            "gaussian" => Ok(DistSpec::Gaussian),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(DistSpec::File(PathBuf::from(p))),
                _ => Err(Error::InvalidArgument(format!("unknown distribution `{s}`"))),
            },
        }
    }
}

impl DistSpec {
    pub fn load(&self, standardize: bool) -> Result<InputDistribution> {
        match self {
            DistSpec::Uniform => Ok(InputDistribution::uniform()),
            DistSpec::Gaussian => Ok(InputDistribution::gaussian()),
            DistSpec::File(p) => {
                let loaded = load_tabulated_pdf(BufReader::new(File::open(p)?), standardize)?;
                if let Some(s) = loaded.applied {
                    eprintln!("standardized {}: shift {:.9}, scale {:.9}", p.display(), s.shift, s.scale);
                }
                Ok(loaded.distribution)
            }
        }
    }
}

/// `optimal`, `g2`, `affine:<slope>,<intercept>[,<lo>,<hi>]`,
/// `limiter:<eta>,<beta>` or `file:<path>` to a `gamma,value` CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum MappingSpec {
    Optimal,
    G2,
    Fixed(NonlinearMapping),
    File(PathBuf),
}

impl FromStr for MappingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let nums = |body: &str| -> Result<Vec<f64>> {
            body.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number `{v}`"))))
                .collect()
        };
        if s == "optimal" {
            return Ok(MappingSpec::Optimal);
        }
        if s == "g2" {
            return Ok(MappingSpec::G2);
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(MappingSpec::File(PathBuf::from(p)));
        }
        if let Some(body) = s.strip_prefix("affine:") {
            let v = nums(body)?;
            let m = match v.as_slice() {
                [slope, icpt] => NonlinearMapping::affine_clipped(*slope, *icpt, 0.0, 1.0)?,
                [slope, icpt, lo, hi] => NonlinearMapping::affine_clipped(*slope, *icpt, *lo, *hi)?,
                _ => return Err(Error::InvalidArgument("affine needs 2 or 4 numbers".into())),
            };
            return Ok(MappingSpec::Fixed(m));
        }
        if let Some(body) = s.strip_prefix("limiter:") {
            let v = nums(body)?;
            let [eta, beta] = v.as_slice() else {
                return Err(Error::InvalidArgument("limiter needs eta,beta".into()));
            };
            return Ok(MappingSpec::Fixed(NonlinearMapping::optimal_limiter(*eta, *beta)?));
        }
        Err(Error::InvalidArgument(format!("unknown mapping `{s}`")))
    }
}

impl MappingSpec {
    pub fn resolve(&self, dist: &InputDistribution, t: f64, branch: Branch) -> Result<NonlinearMapping> {
        match self {
            MappingSpec::Optimal => Ok(solve(dist, t, branch)?.params.mapping()),
            MappingSpec::G2 => Ok(NonlinearMapping::fixed_reference()),
            MappingSpec::Fixed(m) => Ok(m.clone()),
            MappingSpec::File(p) => {
                let (g, v) = crate::dist::read_two_column_csv(BufReader::new(File::open(p)?), "gamma", "value")?;
                NonlinearMapping::tabulated(g, v)
            }
        }
    }
}

/// The general solver; even densities get the same answer faster from the
/// scalar path, but both are fixed points of the same equations.
pub fn solve(dist: &InputDistribution, t: f64, branch: Branch) -> Result<SolveOutcome> {
    solve_general(dist, t, branch)
}

pub fn format_outcome(out: &SolveOutcome, t: f64) -> String {
    let p = &out.params;
    let mut s = String::new();
    let _ = writeln!(s, "branch: {}", out.branch);
    let _ = writeln!(s, "eta_star: {}", p.eta);
    let _ = writeln!(s, "beta_star: {}", p.beta);
    let _ = writeln!(s, "lower_knee: {}", p.lower_knee());
    let _ = writeln!(s, "upper_knee: {}", p.upper_knee());
    let _ = writeln!(s, "sndr_star: {}", out.sndr_star);
    let _ = writeln!(s, "sndr_star_db: {}", out.sndr_star.db());
    let _ = writeln!(s, "sndr_cap_db: {}", crate::mapping::to_db(sndr_cap(t)));
    let _ = writeln!(s, "residual: {:e}", out.residual);
    let _ = writeln!(s, "iterations: {}", out.iterations);
    let _ = writeln!(s, "fixed_points: {}", out.fixed_points.len());
    for fp in &out.fixed_points {
        let _ = writeln!(s, "  eta={} beta={} sndr={}", fp.params.eta, fp.params.beta, fp.sndr);
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
    pub branch: Branch,
    pub log_base: LogBase,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_db > 0.0) || !(self.start_db <= self.stop_db) {
            return Err(Error::InvalidArgument(format!(
                "sweep needs step > 0 and start ≤ stop, got {}:{}:{}",
                self.start_db, self.step_db, self.stop_db
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start_db + self.step_db * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub dsnr_db: f64,
    /// `None` when the solver failed at this point.
    pub optimum: Option<(f64, f64, f64)>,
    pub sndr_g2_db: f64,
    pub cap_lower: f64,
    pub cap_upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub cap_violations: Vec<String>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.optimum.is_none()).count()
    }

    /// At most 10 % of points may fail.
    pub fn acceptable(&self) -> bool {
        self.failures() * 10 <= self.rows.len()
    }
}

/// One row per DSNR point: optimum for `dist`, the fixed `g2` reference,
/// and the Gaussian-input capacity bounds. Points run in parallel; rows
/// come back in DSNR order.
pub fn run_sweep(dist: &InputDistribution, config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let gaussian = InputDistribution::gaussian();
    let g2 = NonlinearMapping::fixed_reference();
    let rows: Vec<(SweepRow, Vec<String>)> = config
        .points()
        .into_par_iter()
        .map(|db| {
            let t = noise_ratio_from_db(db);
            let cap = sndr_cap(t) + OPTIMALITY_TOL;
            let mut violations = Vec::new();
            let optimum = match solve(dist, t, config.branch) {
                Ok(out) => {
                    let s = out.sndr_star.linear();
                    if s > cap {
                        violations.push(format!("{db} dB: optimal SNDR {s} exceeds cap {cap}"));
                    }
                    Some((out.params.eta, out.params.beta, out.sndr_star.db()))
                }
                Err(e) => {
                    log::warn!("solver failed at {db} dB: {e}");
                    None
                }
            };
            let g2_sndr = bussgang(&g2, dist, t).map(|r| r.sndr).ok();
            if let Some(s) = g2_sndr {
                if s.linear() > cap {
                    violations.push(format!("{db} dB: g2 SNDR {} exceeds cap {cap}", s.linear()));
                }
            }
            let lower = solve_symmetric(&gaussian, t, Branch::Positive).map(|o| rate_from_sndr(o.sndr_star));
            let row = SweepRow {
                dsnr_db: db,
                optimum,
                sndr_g2_db: g2_sndr.map(|s| s.db()).unwrap_or(f64::NAN),
                cap_lower: lower.map(|v| config.log_base.from_nats(v)).unwrap_or(f64::NAN),
                cap_upper: config.log_base.from_nats(upper_bound(1.0 / t).unwrap_or(f64::NAN)),
            };
            (row, violations)
        })
        .collect();
    let mut out = SweepResult { rows: Vec::with_capacity(rows.len()), cap_violations: Vec::new() };
    for (r, v) in rows {
        out.rows.push(r);
        out.cap_violations.extend(v);
    }
    Ok(out)
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

/// `dsnr_db,eta_star,beta_star,sndr_opt_db,sndr_g2_db,cap_lower,cap_upper`;
/// failed points leave the optimum cells empty.
pub fn write_sweep_csv<W: Write>(w: W, result: &SweepResult) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["dsnr_db", "eta_star", "beta_star", "sndr_opt_db", "sndr_g2_db", "cap_lower", "cap_upper"])?;
    for r in &result.rows {
        let (eta, beta, sndr) = r.optimum.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        wtr.write_record([
            cell(r.dsnr_db),
            cell(eta),
            cell(beta),
            cell(sndr),
            cell(r.sndr_g2_db),
            cell(r.cap_lower),
            cell(r.cap_upper),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PredistortReport {
    pub lut: PredistortionLut,
    pub outcome: SolveOutcome,
    /// Sup-norm of `u(f(γ)) − g*(γ)` on 10 000 probes.
    pub composition_error: f64,
}

pub fn predistort(
    device: &DeviceCurve,
    dist: &InputDistribution,
    dsnr_db: f64,
    n_points: usize,
    branch: Branch,
) -> Result<PredistortReport> {
    let outcome = solve(dist, noise_ratio_from_db(dsnr_db), branch)?;
    let m = outcome.params.mapping();
    let lut = predistort_curve(device, &m, n_points)?;
    let err = composition_error(device, &lut, &m, 10_000);
    Ok(PredistortReport { lut, outcome, composition_error: err })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSuite {
    Grid,
    Perturb,
    MonteCarlo,
    All,
}

impl FromStr for OracleSuite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(OracleSuite::Grid),
            "perturb" => Ok(OracleSuite::Perturb),
            "montecarlo" | "mc" => Ok(OracleSuite::MonteCarlo),
            "all" => Ok(OracleSuite::All),
            other => Err(Error::InvalidArgument(format!("unknown oracle suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub rows: Vec<OracleRow>,
    pub failures: Vec<String>,
    pub seed: u64,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const ORACLE_SLIVERS: usize = 200;
pub const ORACLE_BUMP_SCALES: [f64; 5] = [0.04, 0.02, 0.01, 0.005, 0.0025];
pub const ORACLE_BUMP_TRIALS: usize = 16;
pub const ORACLE_MC_SAMPLES: usize = 1_000_000;
pub const GRID_POINTS: usize = 128;

/// Runs the requested checks against the positive-branch optimum.
pub fn run_oracle(dist: &InputDistribution, t: f64, suite: OracleSuite, seed: u64) -> Result<OracleOutcome> {
    let out = solve(dist, t, Branch::Positive)?;
    let params = out.params;
    let star = out.sndr_star.linear();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let want = |s: OracleSuite| suite == OracleSuite::All || suite == s;

    if want(OracleSuite::Grid) {
        let eta_hi = 6f64.max(2.0 * params.eta);
        let g = grid_search(dist, t, Grid::new(0.1, eta_hi, GRID_POINTS)?, Grid::new(0.0, 1.0, GRID_POINTS)?)?;
        if g.sndr > star + OPTIMALITY_TOL {
            failures.push(format!("grid point ({}, {}) beats optimum: {} > {}", g.eta, g.beta, g.sndr, star));
        }
        if !g.within_one_cell(params.eta, params.beta) {
            failures.push(format!(
                "grid argmax ({}, {}) not within one cell of ({}, {})",
                g.eta, g.beta, params.eta, params.beta
            ));
        }
        rows.push(OracleRow { kind: "grid".into(), magnitude: g.eta_step, baseline: star, perturbed: g.sndr });
    }

    if want(OracleSuite::Perturb) {
        for (i, case) in [SetCase::IntoLower, SetCase::IntoUpper, SetCase::HalfLine].into_iter().enumerate() {
            for r in random_slivers(dist, t, &params, case, ORACLE_SLIVERS, seed.wrapping_add(i as u64))? {
                if r.improves() {
                    failures.push(format!(
                        "{} sliver of width {} raised SNDR by {:e}",
                        r.kind.label(),
                        r.magnitude,
                        r.delta()
                    ));
                }
                rows.push(OracleRow::from(&r));
            }
        }
        let fit = stationarity_fit(dist, t, &params, &ORACLE_BUMP_SCALES, ORACLE_BUMP_TRIALS, seed.wrapping_add(3))?;
        for r in &fit.reports {
            rows.push(OracleRow::from(r));
        }
        if fit.max_gain > OPTIMALITY_TOL {
            failures.push(format!("bump raised SNDR by {:e}", fit.max_gain));
        }
        if !(fit.r_squared > 0.95) {
            failures.push(format!("bump scaling fit R² = {} (slope {})", fit.r_squared, fit.slope));
        }
    }

    if want(OracleSuite::MonteCarlo) {
        for m in [params.mapping(), NonlinearMapping::fixed_reference()] {
            let quad = bussgang(&m, dist, t)?.sndr.linear();
            let mc = monte_carlo_sndr(&m, dist, t, ORACLE_MC_SAMPLES, seed.wrapping_add(4))?;
            if (mc.estimate - quad).abs() > 3.0 * mc.std_error {
                failures.push(format!("Monte Carlo {} ± {} vs quadrature {}", mc.estimate, mc.std_error, quad));
            }
            rows.push(OracleRow {
                kind: "montecarlo".into(),
                magnitude: mc.std_error,
                baseline: quad,
                perturbed: mc.estimate,
            });
        }
    }

    Ok(OracleOutcome { rows, failures, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_arguments() {
        assert_eq!("uniform".parse::<DistSpec>().unwrap(), DistSpec::Uniform);
        assert_eq!("file:a.csv".parse::<DistSpec>().unwrap(), DistSpec::File("a.csv".into()));
        assert!("file:".parse::<DistSpec>().is_err());
        assert!("cauchy".parse::<DistSpec>().is_err());
        assert_eq!("g2".parse::<MappingSpec>().unwrap(), MappingSpec::G2);
        assert!(matches!("affine:1,0.4".parse::<MappingSpec>().unwrap(), MappingSpec::Fixed(_)));
        assert!("affine:1".parse::<MappingSpec>().is_err());
        assert_eq!("mc".parse::<OracleSuite>().unwrap(), OracleSuite::MonteCarlo);
    }

    #[test]
    fn sweep_points_are_exact() {
        let c = SweepConfig {
            start_db: 0.0,
            stop_db: 40.0,
            step_db: 1.0,
            branch: Branch::Positive,
            log_base: LogBase::Nats,
        };
        let p = c.points();
        assert_eq!(p.len(), 41);
        assert_eq!(p[40], 40.0);
        let bad = SweepConfig { step_db: 0.0, ..c.clone() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { start_db: 5.0, stop_db: 1.0, ..c };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn noise_ratio_conversion() {
        assert!((noise_ratio_from_db(10.0) - 0.1).abs() < 1e-15);
        assert!((noise_ratio_from_db(0.0) - 1.0).abs() < 1e-15);
    }
}
