//! Bounds on the capacity of the dynamic-range-constrained channel with
//! Gaussian noise: `½·log(1 + SNDR) ≤ C ≤ ½·log(1 + DSNR/4)`, where the
//! lower bound uses the SNDR of a Gaussian input.

use std::f64::consts::LN_2;

use crate::dist::InputDistribution;
use crate::error::{Error, Result};
use crate::mapping::{bussgang, NonlinearMapping, Sndr};
use crate::solver::{solve_symmetric, Branch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" | "nat" => Ok(LogBase::Nats),
            "bits" | "bit" => Ok(LogBase::Bits),
            other => Err(Error::InvalidArgument(format!("unknown log base `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBounds {
    pub lower_nats: f64,
    pub upper_nats: f64,
    pub dsnr: f64,
    pub log_base: LogBase,
}

impl CapacityBounds {
    pub fn lower(&self) -> f64 {
        self.log_base.from_nats(self.lower_nats)
    }

    pub fn upper(&self) -> f64 {
        self.log_base.from_nats(self.upper_nats)
    }
}

/// `1/(4t)`: no mapping into `[0, 1]` can exceed this SNDR.
pub fn sndr_cap(t: f64) -> f64 {
    0.25 / t
}

/// `½·ln(1 + dsnr/4)`
pub fn upper_bound(dsnr: f64) -> Result<f64> {
    if !(dsnr >= 0.0) {
        return Err(Error::InvalidArgument(format!("DSNR must be ≥ 0, got {dsnr}")));
    }
    Ok(0.5 * (0.25 * dsnr).ln_1p())
}

/// `½·ln(1 + SNDR)` in nats.
pub fn rate_from_sndr(sndr: Sndr) -> f64 {
    match sndr {
        Sndr::Finite(v) => 0.5 * v.max(0.0).ln_1p(),
        Sndr::Infinite => f64::INFINITY,
    }
}

/// `½·ln(1 + SNDR(mapping, dist, t))`; with no mapping, the SNDR-optimal
/// limiter for `dist` is used, which gives the tightest bound of this form.
pub fn lower_bound(dist: &InputDistribution, t: f64, mapping: Option<&NonlinearMapping>) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidNoise { expected: "> 0", got: t });
    }
    let sndr = match mapping {
        Some(m) => bussgang(m, dist, t)?.sndr,
        None => optimal_for(dist, t)?,
    };
    Ok(rate_from_sndr(sndr))
}

fn optimal_for(dist: &InputDistribution, t: f64) -> Result<Sndr> {
    if dist.is_even(1e-8) {
        Ok(solve_symmetric(dist, t, Branch::Positive)?.sndr_star)
    } else {
        Ok(crate::solver::solve_general(dist, t, Branch::Positive)?.sndr_star)
    }
}

/// Both bounds for a Gaussian input at `dsnr = A²/σv²`.
pub fn bounds(dsnr: f64, mapping: Option<&NonlinearMapping>, log_base: LogBase) -> Result<CapacityBounds> {
    if !(dsnr > 0.0) {
        return Err(Error::InvalidArgument(format!("DSNR must be > 0, got {dsnr}")));
    }
    let lower_nats = lower_bound(&InputDistribution::gaussian(), 1.0 / dsnr, mapping)?;
    Ok(CapacityBounds { lower_nats, upper_nats: upper_bound(dsnr)?, dsnr, log_base })
}
