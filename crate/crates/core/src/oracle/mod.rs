//! Brute-force and sampling checks of limiter optimality.
//!
//! Nothing here calls the solver's moment formulas: every SNDR is computed
//! by quadrature of the (possibly perturbed) mapping, or by sampling, so the
//! results are independent evidence for the solver's output.

mod grid;
mod montecarlo;
mod perturb;
mod piecewise;
mod random;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use grid::{grid_search, Grid, GridResult};
pub use montecarlo::{monte_carlo_sndr, McEstimate, MIN_SAMPLES};
pub use perturb::{
    apply_bump, perturb_function_space, perturb_sets, random_slivers, stationarity_fit, BumpSpec, ScalingFit, SetCase,
    Sliver, MAX_BUMP_SCALE,
};
pub use piecewise::{piecewise_constant_oracle, PiecewiseResult};
pub use random::{random_mapping, random_mapping_search, RandomSearch};

use crate::error::Result;

/// Slack for "a perturbation never beats the optimum".
pub const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// A sliver of the affine region forced to rail 0.
    SetIntoLower,
    /// A sliver of the affine region forced to rail 1.
    SetIntoUpper,
    /// A rail assigned on the wrong half-line.
    HalfLine,
    /// A smooth bump added to `g` inside the affine region.
    Bump,
}

impl PerturbationKind {
    pub fn label(self) -> &'static str {
        match self {
            PerturbationKind::SetIntoLower => "into_lower",
            PerturbationKind::SetIntoUpper => "into_upper",
            PerturbationKind::HalfLine => "half_line",
            PerturbationKind::Bump => "bump",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport {
    pub kind: PerturbationKind,
    pub magnitude: f64,
    pub baseline_sndr: f64,
    pub perturbed_sndr: f64,
    pub seed: Option<u64>,
}

impl PerturbationReport {
    pub fn delta(&self) -> f64 {
        self.perturbed_sndr - self.baseline_sndr
    }

    pub fn improves(&self) -> bool {
        self.delta() > OPTIMALITY_TOL
    }
}

/// One CSV row of oracle output; perturbation reports convert into these.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub kind: String,
    pub magnitude: f64,
    pub baseline: f64,
    pub perturbed: f64,
}

impl From<&PerturbationReport> for OracleRow {
    fn from(r: &PerturbationReport) -> Self {
        Self {
            kind: r.kind.label().to_string(),
            magnitude: r.magnitude,
            baseline: r.baseline_sndr,
            perturbed: r.perturbed_sndr,
        }
    }
}

/// Writes `kind,magnitude,baseline,perturbed,delta`.
pub fn write_rows_csv<W: Write>(w: W, rows: &[OracleRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["kind", "magnitude", "baseline", "perturbed", "delta"])?;
    for r in rows {
        wtr.write_record([
            r.kind.clone(),
            r.magnitude.to_string(),
            r.baseline.to_string(),
            r.perturbed.to_string(),
            (r.perturbed - r.baseline).to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
