//! Sweep DSNR for a Gaussian input and write the gain, bias, SNDR and
//! capacity bounds as CSV, ready for plotting.
//!
//! ```bash
//! cargo run --example gaussian_sweep > sweep.csv
//! ```

use std::io;

use sndr_limiter::app::{run_sweep, write_sweep_csv, SweepConfig};
use sndr_limiter::capacity::LogBase;
use sndr_limiter::dist::InputDistribution;
use sndr_limiter::solver::Branch;

fn main() -> sndr_limiter::Result<()> {
    let config =
        SweepConfig { start_db: 0.0, stop_db: 40.0, step_db: 2.0, branch: Branch::Positive, log_base: LogBase::Bits };
    let result = run_sweep(&InputDistribution::gaussian(), &config)?;
    write_sweep_csv(io::stdout().lock(), &result)?;
    eprintln!(
        "{} points, {} solver failures, {} cap violations",
        result.rows.len(),
        result.failures(),
        result.cap_violations.len()
    );
    Ok(())
}
