//! Local perturbations of a limiter: rail slivers and smooth bumps.

use rand::Rng;

use super::{stream_rng, PerturbationKind, PerturbationReport};
use crate::dist::{InputDistribution, Interval};
use crate::error::{Error, Result};
use crate::mapping::bussgang_with;
use crate::solver::LimiterParams;

pub const MAX_BUMP_SCALE: f64 = 0.05;
const GEOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetCase {
    /// Part of the affine region moved onto rail 0.
    IntoLower,
    /// Part of the affine region moved onto rail 1.
    IntoUpper,
    /// A rail placed on the half-line where the optimum never puts it.
    HalfLine,
}

impl SetCase {
    fn kind(self) -> PerturbationKind {
        match self {
            SetCase::IntoLower => PerturbationKind::SetIntoLower,
            SetCase::IntoUpper => PerturbationKind::SetIntoUpper,
            SetCase::HalfLine => PerturbationKind::HalfLine,
        }
    }
}

/// `[start, start + width]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sliver {
    pub start: f64,
    pub width: f64,
}

impl Sliver {
    fn end(&self) -> f64 {
        self.start + self.width
    }
}

fn sndr_of<G: Fn(f64) -> f64>(g: G, breaks: &[f64], dist: &InputDistribution, t: f64) -> Result<f64> {
    Ok(bussgang_with(g, breaks, dist, t)?.sndr.linear())
}

/// Which rail the sliver is forced to, after checking its geometry.
fn sliver_rail(params: &LimiterParams, sliver: &Sliver, case: SetCase) -> Result<f64> {
    if !(sliver.width >= 0.0) || !sliver.start.is_finite() {
        return Err(Error::InvalidSliver(format!("width must be ≥ 0, got {}", sliver.width)));
    }
    let s = params.regions().affine;
    match case {
        SetCase::IntoLower | SetCase::IntoUpper => {
            if sliver.start < s.lo - GEOMETRY_TOL || sliver.end() > s.hi + GEOMETRY_TOL {
                return Err(Error::InvalidSliver(format!(
                    "[{}, {}] is not inside the affine region [{}, {}]",
                    sliver.start,
                    sliver.end(),
                    s.lo,
                    s.hi
                )));
            }
            Ok(if case == SetCase::IntoLower { 0.0 } else { 1.0 })
        }
        SetCase::HalfLine => {
            // positive half-line gets the rail the optimum keeps on the
            // negative side, and vice versa
            let positive_rail = if params.eta > 0.0 { 0.0 } else { 1.0 };
            if sliver.start >= -GEOMETRY_TOL {
                Ok(positive_rail)
            } else if sliver.end() <= GEOMETRY_TOL {
                Ok(1.0 - positive_rail)
            } else {
                Err(Error::InvalidSliver("half-line sliver must not straddle 0".into()))
            }
        }
    }
}

/// Forces `sliver` onto a rail and compares SNDR against the unmodified
/// limiter (both evaluated with the same quadrature panels).
pub fn perturb_sets(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    sliver: Sliver,
    case: SetCase,
) -> Result<PerturbationReport> {
    let rail = sliver_rail(params, &sliver, case)?;
    let m = params.mapping();
    let mut breaks = m.knees();
    breaks.extend([sliver.start, sliver.end()]);
    let baseline = sndr_of(|x| m.eval(x), &breaks, dist, t)?;
    let perturbed = sndr_of(
        |x| {
            if sliver.width > 0.0 && x >= sliver.start && x <= sliver.end() {
                rail
            } else {
                m.eval(x)
            }
        },
        &breaks,
        dist,
        t,
    )?;
    Ok(PerturbationReport {
        kind: case.kind(),
        magnitude: sliver.width,
        baseline_sndr: baseline,
        perturbed_sndr: perturbed,
        seed: None,
    })
}

/// `n` random slivers for `case`, each from its own stream of `seed`.
pub fn random_slivers(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    case: SetCase,
    n: usize,
    seed: u64,
) -> Result<Vec<PerturbationReport>> {
    let s = effective_affine(dist, params);
    // keep half-line slivers where the density has mass
    let w = dist.window();
    let reach = (s.hi.abs().max(s.lo.abs()) + 1.0).min(w.hi.min(-w.lo));
    (0..n)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let sliver = match case {
                SetCase::IntoLower | SetCase::IntoUpper => {
                    let width = rng.random_range(0.0..=0.5) * s.width();
                    let start = s.lo + rng.random::<f64>() * (s.width() - width);
                    Sliver { start, width }
                }
                SetCase::HalfLine => {
                    let width = rng.random_range(0.01..=1.0) * reach.min(2.0) / 2.0;
                    let offset = rng.random::<f64>() * (reach - width);
                    if rng.random::<bool>() {
                        Sliver { start: offset, width }
                    } else {
                        Sliver { start: -offset - width, width }
                    }
                }
            };
            let mut r = perturb_sets(dist, t, params, sliver, case)?;
            r.seed = Some(seed);
            Ok(r)
        })
        .collect()
}

/// Affine region intersected with the integration window.
fn effective_affine(dist: &InputDistribution, params: &LimiterParams) -> Interval {
    let s = params.regions().affine;
    let w = dist.window();
    let lo = s.lo.max(w.lo);
    let hi = s.hi.min(w.hi);
    if hi > lo {
        Interval { lo, hi }
    } else {
        s
    }
}

/// `amplitude · cos²(π(γ − center) / (2·half_width))` on
/// `|γ − center| < half_width`, added to `g` and clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl BumpSpec {
    fn value(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.half_width;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let c = (0.5 * std::f64::consts::PI * u).cos();
        self.amplitude * c * c
    }
}

/// Adds one bump to the limiter and reports the SNDR change.
pub fn apply_bump(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    bump: &BumpSpec,
) -> Result<PerturbationReport> {
    if !(bump.half_width > 0.0) {
        return Err(Error::InvalidArgument("bump half-width must be positive".into()));
    }
    let m = params.mapping();
    let mut breaks = m.knees();
    breaks.extend([bump.center - bump.half_width, bump.center, bump.center + bump.half_width]);
    let baseline = sndr_of(|x| m.eval(x), &breaks, dist, t)?;
    let perturbed = sndr_of(|x| (m.eval(x) + bump.value(x)).clamp(0.0, 1.0), &breaks, dist, t)?;
    Ok(PerturbationReport {
        kind: PerturbationKind::Bump,
        magnitude: bump.amplitude.abs(),
        baseline_sndr: baseline,
        perturbed_sndr: perturbed,
        seed: None,
    })
}

/// Random bump shapes kept inside the middle 80 % of the affine region.
fn random_bump(rng: &mut impl Rng, s: &Interval, scale: f64) -> BumpSpec {
    let inner_lo = s.lo + 0.1 * s.width();
    let inner_w = 0.8 * s.width();
    let half_width = rng.random_range(0.1..=0.5) * 0.5 * inner_w;
    let center = inner_lo + half_width + rng.random::<f64>() * (inner_w - 2.0 * half_width);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    BumpSpec { center, half_width, amplitude: sign * scale }
}

pub fn perturb_function_space(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    n_trials: usize,
    bump_scale: f64,
    seed: u64,
) -> Result<Vec<PerturbationReport>> {
    if !(0.0..=MAX_BUMP_SCALE).contains(&bump_scale) {
        return Err(Error::InvalidArgument(format!("bump scale must be in [0, {MAX_BUMP_SCALE}], got {bump_scale}")));
    }
    let s = effective_affine(dist, params);
    (0..n_trials)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let bump = random_bump(&mut rng, &s, bump_scale);
            let mut r = apply_bump(dist, t, params, &bump)?;
            r.seed = Some(seed);
            Ok(r)
        })
        .collect()
}

/// Log-log fit of mean `|ΔSNDR|` against bump scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub scales: Vec<f64>,
    pub mean_abs_delta: Vec<f64>,
    /// Fitted exponent; 2 means the first-order change vanishes.
    pub slope: f64,
    pub r_squared: f64,
    /// Smallest `K` with `|ΔSNDR| ≤ K·scale²` over all trials.
    pub k: f64,
    /// Largest SNDR gain seen; should not exceed the optimality slack.
    pub max_gain: f64,
    /// Every trial at every scale, in scale order.
    pub reports: Vec<PerturbationReport>,
}

/// Runs the same `n_trials` bump shapes at every scale and fits
/// `log mean|Δ| = log K + slope · log scale`.
pub fn stationarity_fit(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    scales: &[f64],
    n_trials: usize,
    seed: u64,
) -> Result<ScalingFit> {
    if scales.len() < 2 || n_trials == 0 {
        return Err(Error::InvalidArgument("need ≥ 2 scales and ≥ 1 trial".into()));
    }
    let mut mean_abs = Vec::with_capacity(scales.len());
    let mut k: f64 = 0.0;
    let mut max_gain = f64::NEG_INFINITY;
    let mut all = Vec::with_capacity(scales.len() * n_trials);
    for &scale in scales {
        let reports = perturb_function_space(dist, t, params, n_trials, scale, seed)?;
        let mut acc = 0.0;
        for r in &reports {
            acc += r.delta().abs();
            k = k.max(r.delta().abs() / (scale * scale));
            max_gain = max_gain.max(r.delta());
        }
        mean_abs.push(acc / reports.len() as f64);
        all.extend(reports);
    }
    let xs: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = mean_abs.iter().map(|d| d.ln()).collect();
    let (slope, r_squared) = linear_fit(&xs, &ys);
    Ok(ScalingFit { scales: scales.to_vec(), mean_abs_delta: mean_abs, slope, r_squared, k, max_gain, reports: all })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}
