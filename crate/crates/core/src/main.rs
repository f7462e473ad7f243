use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sndr_limiter::app::{self, DistSpec, MappingSpec, OracleSuite, SweepConfig};
use sndr_limiter::capacity::{bounds, lower_bound, sndr_cap, LogBase};
use sndr_limiter::mapping::{bussgang, to_db};
use sndr_limiter::oracle::write_rows_csv;
use sndr_limiter::predistort::load_device_curve;
use sndr_limiter::solver::Branch;

#[derive(Parser)]
#[command(name = "sndr-limiter", version, about = "SNDR-optimal limiters for range-constrained devices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// uniform, gaussian or file:<path> (CSV with header gamma,density)
    #[arg(long, default_value = "gaussian")]
    dist: String,
    /// Shift and scale a tabulated density to zero mean, unit variance
    #[arg(long)]
    standardize: bool,
    #[arg(long, default_value = "positive")]
    branch: Branch,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimal limiter at one DSNR
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        dsnr_db: f64,
    },
    /// Optimal and reference SNDR over a DSNR range, as CSV
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        start_db: f64,
        #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
        stop_db: f64,
        #[arg(long, default_value_t = 1.0)]
        step_db: f64,
        #[arg(long, default_value = "nats")]
        log_base: LogBase,
    },
    /// SNDR of a given mapping
    Sndr {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        dsnr_db: f64,
        /// optimal, g2, affine:<slope>,<intercept>[,<lo>,<hi>], limiter:<eta>,<beta> or file:<path>
        #[arg(long, default_value = "optimal")]
        mapping: String,
    },
    /// Capacity bounds for a Gaussian input
    Capacity {
        #[arg(long, allow_hyphen_values = true)]
        dsnr_db: f64,
        #[arg(long, default_value = "nats")]
        log_base: LogBase,
        /// Mapping for the lower bound; the optimal limiter when omitted
        #[arg(long)]
        mapping: Option<String>,
        #[arg(long, default_value = "positive")]
        branch: Branch,
    },
    /// Predistortion table that turns a device curve into the optimal limiter
    Predistort {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        dsnr_db: f64,
        /// CSV with header drive,output
        #[arg(long)]
        device: PathBuf,
        #[arg(long, default_value_t = 257)]
        points: usize,
    },
    /// Independent checks of the optimum
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        dsnr_db: f64,
        /// grid, perturb, montecarlo or all
        #[arg(long, default_value = "all")]
        suite: OracleSuite,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

fn sink(out: &Option<PathBuf>) -> sndr_limiter::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn dist_of(c: &Common) -> sndr_limiter::Result<sndr_limiter::dist::InputDistribution> {
    c.dist.parse::<DistSpec>()?.load(c.standardize)
}

fn run(cli: Cli) -> sndr_limiter::Result<i32> {
    match cli.cmd {
        Cmd::Solve { common, dsnr_db } => {
            let dist = dist_of(&common)?;
            let t = app::noise_ratio_from_db(dsnr_db);
            let out = app::solve(&dist, t, common.branch)?;
            sink(&common.out)?.write_all(app::format_outcome(&out, t).as_bytes())?;
        }
        Cmd::Sweep { common, start_db, stop_db, step_db, log_base } => {
            let dist = dist_of(&common)?;
            let cfg = SweepConfig { start_db, stop_db, step_db, branch: common.branch, log_base };
            let res = app::run_sweep(&dist, &cfg)?;
            app::write_sweep_csv(sink(&common.out)?, &res)?;
            if !res.cap_violations.is_empty() {
                for v in &res.cap_violations {
                    eprintln!("cap violated: {v}");
                }
                return Ok(app::EXIT_ORACLE);
            }
            if !res.acceptable() {
                eprintln!("solver failed at {} of {} points", res.failures(), res.rows.len());
                return Ok(app::EXIT_SOLVER);
            }
        }
        Cmd::Sndr { common, dsnr_db, mapping } => {
            let dist = dist_of(&common)?;
            let t = app::noise_ratio_from_db(dsnr_db);
            let m = mapping.parse::<MappingSpec>()?.resolve(&dist, t, common.branch)?;
            let r = bussgang(&m, &dist, t)?;
            let mut w = sink(&common.out)?;
            writeln!(w, "alpha: {}", r.alpha)?;
            writeln!(w, "distortion_power: {}", r.distortion_power)?;
            writeln!(w, "sndr: {}", r.sndr)?;
            writeln!(w, "sndr_db: {}", r.sndr.db())?;
            writeln!(w, "sndr_cap_db: {}", to_db(sndr_cap(t)))?;
        }
        Cmd::Capacity { dsnr_db, log_base, mapping, branch } => {
            let t = app::noise_ratio_from_db(dsnr_db);
            let b = match mapping {
                None => bounds(1.0 / t, None, log_base)?,
                Some(s) => {
                    let g = sndr_limiter::dist::InputDistribution::gaussian();
                    let m = s.parse::<MappingSpec>()?.resolve(&g, t, branch)?;
                    let lo = lower_bound(&g, t, Some(&m))?;
                    let mut b = bounds(1.0 / t, None, log_base)?;
                    b.lower_nats = lo;
                    b
                }
            };
            println!("lower: {} {}", b.lower(), log_base.label());
            println!("upper: {} {}", b.upper(), log_base.label());
        }
        Cmd::Predistort { common, dsnr_db, device, points } => {
            let dist = dist_of(&common)?;
            let curve = load_device_curve(BufReader::new(File::open(&device)?), true)?;
            let rep = app::predistort(&curve, &dist, dsnr_db, points, common.branch)?;
            rep.lut.write_csv(sink(&common.out)?)?;
            eprintln!("eta_star: {} beta_star: {}", rep.outcome.params.eta, rep.outcome.params.beta);
            eprintln!("composition_error: {:e}", rep.composition_error);
        }
        Cmd::Oracle { common, dsnr_db, suite, seed } => {
            let dist = dist_of(&common)?;
            let t = app::noise_ratio_from_db(dsnr_db);
            let res = app::run_oracle(&dist, t, suite, seed)?;
            write_rows_csv(sink(&common.out)?, &res.rows)?;
            eprintln!("seed: {seed}");
            if !res.passed() {
                for f in &res.failures {
                    eprintln!("oracle failure: {f}");
                }
                return Ok(app::EXIT_ORACLE);
            }
        }
    }
    Ok(app::EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { app::EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(app::exit_code(&e) as u8)
        }
    }
}
