//! SNDR-optimal limiter parameters.
//!
//! The optimal `g` is the double-sided limiter `clamp(γ/η + β, 0, 1)`. With
//! `L`, `S`, `U` the rail-0, affine and rail-1 regions it induces, and
//! `C_k^X` the partial moments over region `X`, the optimum is a fixed point
//! of
//!
//! ```text
//! η = (C0U·C1S + C1U − C0S·C1U) / (C0U·C0L + (1 − C0S)·t)
//! β = (C0U·C1S + C0U·C1U + C1S·t) / (C0U·C1S + C1U − C0S·C1U)
//! ```
//!
//! and the optimal SNDR is `R / (1 − R)` with `R = C2S + η·C1U + η·β·C1S`.
//!
//! For even densities `β = 1/2` and the system collapses to the scalar
//! equation `η·(C0U + 2t) = 2·C1U` with `U = [η/2, ∞)`.

use std::f64::consts::SQRT_2;

use crate::dist::{normal_pdf, normal_sf, InputDistribution, Interval, PartialMoments, SQRT_3};
use crate::error::{Error, Result};
use crate::mapping::{NonlinearMapping, Sndr};
use crate::rootfind::safeguarded_newton;

pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const DAMPING: f64 = 0.5;
pub const MAX_ITER_PER_START: usize = 500;
const EVEN_TOL: f64 = 1e-8;
const ROOT_XTOL: f64 = 1e-15;
/// Fixed points closer than this are reported once.
const DISTINCT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }

    pub fn of(eta: f64) -> Self {
        if eta < 0.0 {
            Branch::Negative
        } else {
            Branch::Positive
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "pos" | "+" => Ok(Branch::Positive),
            "negative" | "neg" | "-" => Ok(Branch::Negative),
            other => Err(Error::InvalidArgument(format!("unknown branch `{other}`"))),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Positive => "positive",
            Branch::Negative => "negative",
        })
    }
}

/// Gain denominator `η` (slope `1/η`) and normalized bias `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterParams {
    pub eta: f64,
    pub beta: f64,
}

/// The three regions a limiter induces on the γ axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regions {
    /// `g = 0`
    pub lower: Interval,
    /// `0 < g < 1`
    pub affine: Interval,
    /// `g = 1`
    pub upper: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMoments {
    pub lower: PartialMoments,
    pub affine: PartialMoments,
    pub upper: PartialMoments,
}

impl LimiterParams {
    pub fn new(eta: f64, beta: f64) -> Result<Self> {
        if eta == 0.0 || !eta.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("η must be finite and non-zero, got {eta}")));
        }
        Ok(Self { eta, beta })
    }

    /// `−βη`: where `g` leaves rail 0.
    pub fn lower_knee(&self) -> f64 {
        -self.beta * self.eta
    }

    /// `η − βη`: where `g` reaches rail 1.
    pub fn upper_knee(&self) -> f64 {
        self.eta - self.beta * self.eta
    }

    pub fn branch(&self) -> Branch {
        Branch::of(self.eta)
    }

    pub fn regions(&self) -> Regions {
        let (a, b) = (self.lower_knee(), self.upper_knee());
        if self.eta > 0.0 {
            Regions { lower: Interval::below(a), affine: Interval { lo: a, hi: b }, upper: Interval::above(b) }
        } else {
            Regions { lower: Interval::above(a), affine: Interval { lo: b, hi: a }, upper: Interval::below(b) }
        }
    }

    pub fn mapping(&self) -> NonlinearMapping {
        NonlinearMapping::OptimalLimiter { eta: self.eta, beta: self.beta }
    }

    /// The mirrored limiter `1 − g`, which has the same SNDR.
    pub fn mirrored(&self) -> Self {
        Self { eta: -self.eta, beta: 1.0 - self.beta }
    }
}

pub fn region_moments(dist: &InputDistribution, params: &LimiterParams) -> RegionMoments {
    let r = params.regions();
    RegionMoments {
        lower: dist.moments_unchecked(&r.lower),
        affine: dist.moments_unchecked(&r.affine),
        upper: dist.moments_unchecked(&r.upper),
    }
}

/// One application of the stationarity equations: the `(η, β)` implied by
/// the regions of `params`.
pub fn fixed_point_map(dist: &InputDistribution, t: f64, params: &LimiterParams) -> Result<LimiterParams> {
    let m = region_moments(dist, params);
    let (c0u, c1u) = (m.upper.c0, m.upper.c1);
    let (c0s, c1s) = (m.affine.c0, m.affine.c1);
    let c0l = m.lower.c0;

    let num = c0u * c1s + c1u - c0s * c1u;
    let den = c0u * c0l + (1.0 - c0s) * t;
    let eta = num / den;
    let beta = (c0u * c1s + c0u * c1u + c1s * t) / num;
    if !eta.is_finite() || !beta.is_finite() || eta == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "degenerate regions at (η, β) = ({}, {}): no clipping mass",
            params.eta, params.beta
        )));
    }
    Ok(LimiterParams { eta, beta })
}

/// `max(|Δη|, |Δβ|)` of one undamped map application.
pub fn fixed_point_residual(dist: &InputDistribution, t: f64, params: &LimiterParams) -> Result<f64> {
    let next = fixed_point_map(dist, t, params)?;
    Ok((next.eta - params.eta).abs().max((next.beta - params.beta).abs()))
}

/// `R / (1 − R)` with `R = C2S + η·C1U + η·β·C1S`.
pub fn optimal_sndr(params: &LimiterParams, dist: &InputDistribution, t: f64) -> Result<Sndr> {
    check_noise(t, false)?;
    let m = region_moments(dist, params);
    let r = m.affine.c2 + params.eta * m.upper.c1 + params.eta * params.beta * m.affine.c1;
    if !(r > 0.0) || r > 1.0 + 1e-12 {
        return Err(Error::InconsistentParams(r));
    }
    if 1.0 - r <= f64::EPSILON {
        return Ok(Sndr::Infinite);
    }
    Ok(Sndr::Finite(r / (1.0 - r)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub params: LimiterParams,
    pub sndr: Sndr,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub params: LimiterParams,
    pub sndr_star: Sndr,
    pub iterations: usize,
    pub residual: f64,
    pub branch: Branch,
    /// Every distinct converged fixed point, best first.
    pub fixed_points: Vec<FixedPoint>,
}

fn check_noise(t: f64, strict: bool) -> Result<()> {
    let ok = if strict { t > 0.0 } else { t >= 0.0 };
    if !ok || !t.is_finite() {
        return Err(Error::InvalidNoise { expected: if strict { "> 0" } else { "≥ 0" }, got: t });
    }
    Ok(())
}

/// Starting points `(η₀, β₀)` for the multi-start fixed-point search.
pub fn start_schedule(dist: &InputDistribution, t: f64, branch: Branch) -> Vec<LimiterParams> {
    let half_mean_abs = dist.moments_unchecked(&Interval::above(0.0)).c1;
    let data_driven = 2.0 * half_mean_abs / (0.5 + 2.0 * t);
    let mut starts = Vec::new();
    for eta in [0.5, 1.0, 2.0, 4.0, data_driven] {
        for beta in [0.25, 0.5, 0.75] {
            starts.push(LimiterParams { eta: branch.sign() * eta, beta });
        }
    }
    starts
}

/// Damped fixed-point iteration from one start. `None` if it leaves the
/// branch, hits degenerate regions, or runs out of iterations.
fn iterate_from(
    dist: &InputDistribution,
    t: f64,
    start: LimiterParams,
    branch: Branch,
) -> Option<(LimiterParams, usize)> {
    let mut p = start;
    for it in 1..=MAX_ITER_PER_START {
        let next = fixed_point_map(dist, t, &p).ok()?;
        if next.branch() != branch {
            return None;
        }
        let delta = (next.eta - p.eta).abs().max((next.beta - p.beta).abs());
        if delta < FIXED_POINT_TOL {
            return Some((next, it));
        }
        p = LimiterParams { eta: p.eta + DAMPING * (next.eta - p.eta), beta: p.beta + DAMPING * (next.beta - p.beta) };
    }
    None
}

/// Solves the coupled stationarity equations for any input density.
///
/// Runs the damped iteration from every start in [`start_schedule`], keeps
/// the distinct converged fixed points, and returns the one with the
/// highest SNDR.
pub fn solve_general(dist: &InputDistribution, t: f64, branch: Branch) -> Result<SolveOutcome> {
    check_noise(t, true)?;
    let starts = start_schedule(dist, t, branch);
    let mut found: Vec<FixedPoint> = Vec::new();
    let mut total_iter = 0;
    let mut best_iter = 0;
    for start in &starts {
        let Some((p, iters)) = iterate_from(dist, t, *start, branch) else {
            log::debug!("start ({}, {}) did not converge", start.eta, start.beta);
            total_iter += MAX_ITER_PER_START;
            continue;
        };
        total_iter += iters;
        let Ok(sndr) = optimal_sndr(&p, dist, t) else {
            continue;
        };
        let residual = fixed_point_residual(dist, t, &p).unwrap_or(f64::INFINITY);
        if let Some(prev) = found
            .iter_mut()
            .find(|f| (f.params.eta - p.eta).abs() < DISTINCT_TOL && (f.params.beta - p.beta).abs() < DISTINCT_TOL)
        {
            if residual < prev.residual {
                *prev = FixedPoint { params: p, sndr, residual };
            }
            continue;
        }
        if found.is_empty() || sndr.linear() > found[0].sndr.linear() {
            best_iter = iters;
        }
        found.push(FixedPoint { params: p, sndr, residual });
    }
    if found.is_empty() {
        return Err(Error::NoConvergence { starts: starts.len(), max_iter: MAX_ITER_PER_START });
    }
    found.sort_by(|a, b| b.sndr.linear().total_cmp(&a.sndr.linear()));
    let best = found[0];
    log::debug!("solve_general: {} fixed point(s), {} total iterations", found.len(), total_iter);
    Ok(SolveOutcome {
        params: best.params,
        sndr_star: best.sndr,
        iterations: best_iter,
        residual: best.residual,
        branch,
        fixed_points: found,
    })
}

/// Even densities: fixes `β = 1/2` and solves `η·(C0U + 2t) = 2·C1U`.
///
/// The derivative of the left-minus-right side is `C0U + 2t > 0`, so the
/// root is unique on the branch and Newton steps are cheap.
pub fn solve_symmetric(dist: &InputDistribution, t: f64, branch: Branch) -> Result<SolveOutcome> {
    check_noise(t, true)?;
    let mismatch = dist.evenness_mismatch();
    if mismatch > EVEN_TOL {
        return Err(Error::AsymmetricInput { mismatch });
    }
    let reach = 2.0 * dist.support_radius();
    let fdf = |eta: f64| {
        let tail = match branch {
            Branch::Positive => Interval::above(0.5 * eta),
            Branch::Negative => Interval::below(0.5 * eta),
        };
        let m = dist.moments_unchecked(&tail);
        (eta * (m.c0 + 2.0 * t) - 2.0 * m.c1, m.c0 + 2.0 * t)
    };
    let (lo, hi) = match branch {
        Branch::Positive => (0.0, reach),
        Branch::Negative => (-reach, 0.0),
    };
    let root = safeguarded_newton(fdf, lo, hi, ROOT_XTOL, 400)?;
    let params = LimiterParams::new(root.x, 0.5)?;
    let sndr = optimal_sndr(&params, dist, t)?;
    let residual = fixed_point_residual(dist, t, &params)?;
    Ok(SolveOutcome {
        params,
        sndr_star: sndr,
        iterations: root.iterations,
        residual,
        branch,
        fixed_points: vec![FixedPoint { params, sndr, residual }],
    })
}

/// Closed-form `η*` for the uniform input: the smaller root of
/// `η² − (16√3·t + 4√3)·η + 12 = 0`, negated for the negative branch.
/// The larger root puts both knees outside the support and is discarded.
pub fn uniform_eta_closed_form(t: f64, branch: Branch) -> Result<f64> {
    check_noise(t, false)?;
    // 12 / (larger root) avoids cancellation in the explicit smaller root.
    let larger = 8.0 * SQRT_3 * t + 2.0 * SQRT_3 + 4.0 * (12.0 * t * t + 6.0 * t).sqrt();
    Ok(branch.sign() * 12.0 / larger)
}

/// Left minus right side of the Gaussian `η*` equation,
/// `η·(½ − ½·erf(η/(2√2)) + 2t) − (2/√(2π))·exp(−η²/8)`, for `η > 0`;
/// mirrored for `η < 0`.
pub fn gaussian_eta_residual(eta: f64, t: f64) -> f64 {
    let a = eta.abs();
    let lhs = a * (normal_sf(a / 2.0) + 2.0 * t);
    let rhs = 2.0 * normal_pdf(a / 2.0);
    (lhs - rhs) * eta.signum()
}

/// Root of the Gaussian `η*` equation on `(0, 12]` (or `[−12, 0)`).
pub fn gaussian_eta_solve(t: f64, branch: Branch) -> Result<f64> {
    check_noise(t, true)?;
    let s = branch.sign();
    // f(η) for the positive branch; the negative branch is its mirror image.
    let fdf = |eta: f64| {
        let lhs = eta * (0.5 * libm::erfc(eta / (2.0 * SQRT_2)) + 2.0 * t);
        let rhs = 2.0 * normal_pdf(eta / 2.0);
        (lhs - rhs, normal_sf(eta / 2.0) + 2.0 * t)
    };
    let root = safeguarded_newton(fdf, 0.0, 12.0, ROOT_XTOL, 400)?;
    Ok(s * root.x)
}
