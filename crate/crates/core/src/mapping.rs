//! Normalized nonlinearities `g: ℝ → [0, 1]` and their Bussgang statistics.
//!
//! A physical mapping `h(x) = A·g(x/σx)` is described entirely by `g`, the
//! input distribution of `γ = x/σx` and the noise ratio `t = σv²/A²`. The
//! Bussgang gain is `α = E[γ g(γ)]` in these units, the distortion power is
//! `var[g] − α²`, and
//!
//! ```text
//! SNDR = E²[γ g] / (var[g] − E²[γ g] + t)
//! ```

use std::fmt;

use crate::dist::{ChannelSpec, InputDistribution};
use crate::error::{Error, Result};
use crate::quad;

/// Denominators at or below this are treated as zero when `t = 0`.
const ZERO_DENOMINATOR: f64 = 1e-12;

/// A piecewise-linear `g`, clamped to `[0, 1]` and held constant beyond its
/// end knots.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingTable {
    gamma: Vec<f64>,
    value: Vec<f64>,
}

impl MappingTable {
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn value(&self) -> &[f64] {
        &self.value
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.gamma.len();
        if x <= self.gamma[0] {
            return self.value[0];
        }
        if x >= self.gamma[n - 1] {
            return self.value[n - 1];
        }
        let i = self.gamma.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
        let w = (x - self.gamma[i]) / (self.gamma[i + 1] - self.gamma[i]);
        self.value[i] + w * (self.value[i + 1] - self.value[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearMapping {
    /// `clamp(γ/η + β, 0, 1)`: the double-sided limiter. For `η < 0` the
    /// rails swap sides.
    OptimalLimiter {
        eta: f64,
        beta: f64,
    },
    /// `clamp(slope·γ + intercept, lo_clip, hi_clip)` with
    /// `0 ≤ lo_clip ≤ hi_clip ≤ 1`.
    AffineClipped {
        slope: f64,
        intercept: f64,
        lo_clip: f64,
        hi_clip: f64,
    },
    Tabulated(MappingTable),
}

impl NonlinearMapping {
    pub fn optimal_limiter(eta: f64, beta: f64) -> Result<Self> {
        if eta == 0.0 || !eta.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidMapping(format!("limiter needs finite η ≠ 0 and finite β, got ({eta}, {beta})")));
        }
        Ok(Self::OptimalLimiter { eta, beta })
    }

    pub fn affine_clipped(slope: f64, intercept: f64, lo_clip: f64, hi_clip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo_clip) || !(0.0..=1.0).contains(&hi_clip) || lo_clip > hi_clip {
            return Err(Error::InvalidMapping(format!(
                "clip levels [{lo_clip}, {hi_clip}] must satisfy 0 ≤ lo ≤ hi ≤ 1"
            )));
        }
        if !slope.is_finite() || !intercept.is_finite() {
            return Err(Error::InvalidMapping("slope and intercept must be finite".into()));
        }
        Ok(Self::AffineClipped { slope, intercept, lo_clip, hi_clip })
    }

    /// Unit-slope limiter with knees at −0.4 and 0.6, a fixed non-optimal
    /// reference design.
    pub fn fixed_reference() -> Self {
        Self::AffineClipped { slope: 1.0, intercept: 0.4, lo_clip: 0.0, hi_clip: 1.0 }
    }

    pub fn constant(level: f64) -> Result<Self> {
        Self::affine_clipped(0.0, level, level.clamp(0.0, 1.0), level.clamp(0.0, 1.0))
    }

    /// Values outside `[0, 1]` are clamped.
    pub fn tabulated(gamma: Vec<f64>, value: Vec<f64>) -> Result<Self> {
        if gamma.len() != value.len() || gamma.len() < 2 {
            return Err(Error::InvalidMapping("tabulated mapping needs ≥ 2 matching knots".into()));
        }
        if gamma.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMapping("tabulated mapping grid must be strictly increasing".into()));
        }
        if value.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidMapping("tabulated mapping has NaN values".into()));
        }
        let value = value.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self::Tabulated(MappingTable { gamma, value }))
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        match self {
            Self::OptimalLimiter { eta, beta } => (gamma / eta + beta).clamp(0.0, 1.0),
            Self::AffineClipped { slope, intercept, lo_clip, hi_clip } => {
                (slope * gamma + intercept).clamp(*lo_clip, *hi_clip)
            }
            Self::Tabulated(t) => t.eval(gamma),
        }
    }

    /// Points where `g` is not smooth, in increasing order.
    pub fn knees(&self) -> Vec<f64> {
        let mut k = match self {
            Self::OptimalLimiter { eta, beta } => vec![-beta * eta, eta - beta * eta],
            Self::AffineClipped { slope, intercept, lo_clip, hi_clip } => {
                if *slope == 0.0 {
                    Vec::new()
                } else {
                    vec![(lo_clip - intercept) / slope, (hi_clip - intercept) / slope]
                }
            }
            Self::Tabulated(t) => t.gamma.clone(),
        };
        k.sort_by(f64::total_cmp);
        k
    }
}

/// SNDR as a linear ratio, with an explicit infinite case for the
/// distortionless noiseless limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sndr {
    Finite(f64),
    Infinite,
}

impl Sndr {
    pub fn linear(&self) -> f64 {
        match self {
            Sndr::Finite(v) => *v,
            Sndr::Infinite => f64::INFINITY,
        }
    }

    /// `10·log10`; `−∞` at zero.
    pub fn db(&self) -> f64 {
        match self {
            Sndr::Finite(v) => to_db(*v),
            Sndr::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Sndr::Infinite)
    }
}

impl fmt::Display for Sndr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sndr::Finite(v) => write!(f, "{v}"),
            Sndr::Infinite => f.write_str("inf"),
        }
    }
}

pub fn to_db(linear: f64) -> f64 {
    if linear <= 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * linear.log10()
    }
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BussgangReport {
    /// `E[γ g(γ)]`, the Bussgang gain in normalized units (`α σx / A`).
    pub alpha: f64,
    /// `var[g] − α²`, normalized by `A²`.
    pub distortion_power: f64,
    /// `E[g(γ)]`
    pub mean_out: f64,
    /// `E[g²(γ)]`
    pub second_moment: f64,
    pub noise_ratio: f64,
    pub sndr: Sndr,
}

impl BussgangReport {
    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean_out * self.mean_out
    }
}

pub fn sndr_db(report: &BussgangReport) -> f64 {
    report.sndr.db()
}

/// Bussgang statistics of `m` under `dist` at noise ratio `t ≥ 0`.
pub fn bussgang(m: &NonlinearMapping, dist: &InputDistribution, t: f64) -> Result<BussgangReport> {
    bussgang_with(|x| m.eval(x), &m.knees(), dist, t)
}

/// Same as [`bussgang`] for an arbitrary `g`; `breaks` lists its kinks.
pub fn bussgang_with<G: Fn(f64) -> f64>(
    g: G,
    breaks: &[f64],
    dist: &InputDistribution,
    t: f64,
) -> Result<BussgangReport> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidNoise { expected: "finite and ≥ 0", got: t });
    }
    let alpha = dist.expect(|x| x * g(x), breaks);
    let mean_out = dist.expect(&g, breaks);
    let second_moment = dist.expect(
        |x| {
            let v = g(x);
            v * v
        },
        breaks,
    );
    Ok(report_from_moments(alpha, mean_out, second_moment, t))
}

pub(crate) fn report_from_moments(alpha: f64, mean_out: f64, second_moment: f64, t: f64) -> BussgangReport {
    let distortion = (second_moment - mean_out * mean_out - alpha * alpha).max(0.0);
    let denom = distortion + t;
    let signal = alpha * alpha;
    let sndr = if t == 0.0 && denom <= ZERO_DENOMINATOR {
        if signal > 0.0 {
            Sndr::Infinite
        } else {
            Sndr::Finite(0.0)
        }
    } else {
        Sndr::Finite(signal / denom)
    };
    BussgangReport { alpha, distortion_power: distortion, mean_out, second_moment, noise_ratio: t, sndr }
}

/// SNDR in physical units for `h(x) = A·g(x/σx)` with noise variance
/// `channel.noise_var`, integrating over `x` directly.
pub fn sndr_physical(m: &NonlinearMapping, dist: &InputDistribution, channel: &ChannelSpec) -> Sndr {
    let (a, sx, nv) = (channel.range, channel.sigma_x, channel.noise_var);
    let window = dist.window();
    let (lo, hi) = (window.lo * sx, window.hi * sx);
    let mut breaks: Vec<f64> = m.knees().into_iter().chain(dist.breakpoints()).map(|k| k * sx).collect();
    breaks.sort_by(f64::total_cmp);
    let tol = dist.quad_tol() * a * a * sx * sx;
    let pdf_x = |x: f64| dist.pdf(x / sx) / sx;
    let h = |x: f64| a * m.eval(x / sx);
    let e = |f: &dyn Fn(f64) -> f64| quad::integrate(|x| f(x) * pdf_x(x), lo, hi, &breaks, tol);

    let var_x = e(&|x| x * x);
    let exh = e(&|x| x * h(x));
    let eh = e(&h);
    let eh2 = e(&|x| h(x) * h(x));
    let signal = exh * exh / var_x;
    let distortion = (eh2 - signal - eh * eh).max(0.0);
    if nv == 0.0 && distortion <= ZERO_DENOMINATOR * a * a {
        return if signal > 0.0 { Sndr::Infinite } else { Sndr::Finite(0.0) };
    }
    Sndr::Finite(signal / (distortion + nv))
}
