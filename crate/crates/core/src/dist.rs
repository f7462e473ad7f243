//! Normalized input distributions and their partial moments.
//!
//! Every distribution here describes `γ = x / σx`, the zero-mean,
//! unit-variance version of the input. The partial moment
//! `C_k(I) = E[γ^k · 1{γ ∈ I}]` over an interval `I` is what the optimal
//! limiter equations are built from.
//!
//! Uniform and Gaussian inputs have exact closed forms. Tabulated densities
//! are piecewise linear, so their moments are integrated exactly segment by
//! segment. An independent quadrature route is also available for
//! cross-checking.

use std::f64::consts::SQRT_2;
use std::io::Read;

use crate::error::{Error, Result};
use crate::quad;

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-14;
pub const DEFAULT_QUAD_TOL: f64 = 1e-13;
const MIN_KNOTS: usize = 8;

/// A closed or open interval of the real line; endpoints may be infinite.
///
/// Open/closed does not matter for continuous densities, so only the
/// endpoints are stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::MalformedInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    /// `[a, +∞)`
    pub fn above(a: f64) -> Self {
        Self { lo: a, hi: f64::INFINITY }
    }

    /// `(−∞, b]`
    pub fn below(b: f64) -> Self {
        Self { lo: f64::NEG_INFINITY, hi: b }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn clip(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

/// Orders 0, 1 and 2 of the partial moments over one interval.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PartialMoments {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl std::ops::Add for PartialMoments {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { c0: self.c0 + o.c0, c1: self.c1 + o.c1, c2: self.c2 + o.c2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    UniformSymmetric,
    StandardGaussian,
    Tabulated,
}

/// Piecewise-linear density through `(gamma, density)` knots; zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfTable {
    gamma: Vec<f64>,
    density: Vec<f64>,
}

impl PdfTable {
    pub fn new(gamma: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if gamma.len() != density.len() {
            return Err(Error::InvalidArgument("gamma/density length mismatch".into()));
        }
        if gamma.len() < MIN_KNOTS {
            return Err(Error::TooFewKnots { min: MIN_KNOTS, got: gamma.len() });
        }
        for (row, w) in gamma.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::NonMonotoneGrid { row: row + 1 });
            }
        }
        if let Some((row, &value)) = density.iter().enumerate().find(|(_, d)| !(**d >= 0.0) || !d.is_finite()) {
            return Err(Error::NegativeDensity { row, value });
        }
        let table = Self { gamma, density };
        if !(table.raw_moments().c0 > 0.0) {
            return Err(Error::ZeroMass);
        }
        Ok(table)
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    fn support(&self) -> Interval {
        Interval { lo: self.gamma[0], hi: *self.gamma.last().unwrap() }
    }

    fn raw_moments(&self) -> PartialMoments {
        self.moments_over(&Interval::real_line())
    }

    fn pdf(&self, x: f64) -> f64 {
        let n = self.gamma.len();
        if x < self.gamma[0] || x > self.gamma[n - 1] {
            return 0.0;
        }
        let i = self.gamma.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.gamma[i], self.gamma[i + 1]);
        let (d0, d1) = (self.density[i], self.density[i + 1]);
        d0 + (d1 - d0) * (x - x0) / (x1 - x0)
    }

    /// Exact integral of `γ^k p(γ)` over `set`, segment by segment.
    fn moments_over(&self, set: &Interval) -> PartialMoments {
        let mut m = PartialMoments::default();
        for i in 0..self.gamma.len() - 1 {
            let (x0, x1) = (self.gamma[i], self.gamma[i + 1]);
            let Some(seg) = set.clip(&Interval { lo: x0, hi: x1 }) else {
                continue;
            };
            let slope = (self.density[i + 1] - self.density[i]) / (x1 - x0);
            // p(x) = slope * (x - x0) + d0; integrate in the local coordinate
            // u = x - x0 to avoid cancellation on shifted grids.
            let d0 = self.density[i];
            let (ua, ub) = (seg.lo - x0, seg.hi - x0);
            let p = |k: i32| (ub.powi(k) - ua.powi(k)) / k as f64;
            // ∫ u^j (slope u + d0) du
            let i0 = slope * p(2) + d0 * p(1);
            let i1 = slope * p(3) + d0 * p(2);
            let i2 = slope * p(4) + d0 * p(3);
            // x = u + x0
            m.c0 += i0;
            m.c1 += i1 + x0 * i0;
            m.c2 += i2 + 2.0 * x0 * i1 + x0 * x0 * i0;
        }
        m
    }

    /// Cumulative mass up to `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.moments_over(&Interval::below(x)).c0
    }

    /// Inverse CDF by locating the segment, then solving the quadratic.
    pub(crate) fn quantile(&self, u: f64) -> f64 {
        let n = self.gamma.len();
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let (x0, x1) = (self.gamma[i], self.gamma[i + 1]);
            let (d0, d1) = (self.density[i], self.density[i + 1]);
            let h = x1 - x0;
            let mass = 0.5 * (d0 + d1) * h;
            if acc + mass >= u || i == n - 2 {
                let need = (u - acc).clamp(0.0, mass);
                let slope = (d1 - d0) / h;
                // 0.5 slope s² + d0 s = need
                let s = if need <= 0.0 {
                    0.0
                } else if slope.abs() < 1e-300 {
                    if d0 > 0.0 {
                        need / d0
                    } else {
                        0.0
                    }
                } else {
                    let disc = (d0 * d0 + 2.0 * slope * need).max(0.0);
                    2.0 * need / (d0 + disc.sqrt())
                };
                return x0 + s.clamp(0.0, h);
            }
            acc += mass;
        }
        self.gamma[n - 1]
    }
}

/// Normalized PDF of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    kind: DistKind,
    table: Option<PdfTable>,
    support: Interval,
    tail_epsilon: f64,
    quad_tol: f64,
    /// Bounded window used when integrating numerically.
    window: Interval,
}

impl InputDistribution {
    /// Uniform on `[−√3, √3]`.
    pub fn uniform() -> Self {
        let support = Interval { lo: -SQRT_3, hi: SQRT_3 };
        Self {
            kind: DistKind::UniformSymmetric,
            table: None,
            support,
            tail_epsilon: 0.0,
            quad_tol: DEFAULT_QUAD_TOL,
            window: support,
        }
    }

    pub fn gaussian() -> Self {
        Self::gaussian_with_tail(DEFAULT_TAIL_EPSILON)
    }

    /// Standard normal; numerical integration is truncated where the
    /// second-moment tail mass drops below `tail_epsilon`.
    pub fn gaussian_with_tail(tail_epsilon: f64) -> Self {
        let cut = gaussian_truncation(tail_epsilon);
        Self {
            kind: DistKind::StandardGaussian,
            table: None,
            support: Interval::real_line(),
            tail_epsilon,
            quad_tol: DEFAULT_QUAD_TOL,
            window: Interval { lo: -cut, hi: cut },
        }
    }

    pub fn tabulated(table: PdfTable) -> Self {
        let support = table.support();
        Self {
            kind: DistKind::Tabulated,
            table: Some(table),
            support,
            tail_epsilon: 0.0,
            quad_tol: DEFAULT_QUAD_TOL,
            window: support,
        }
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn table(&self) -> Option<&PdfTable> {
        self.table.as_ref()
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    /// The bounded interval numerical integration runs over.
    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail_epsilon
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.kind {
            DistKind::UniformSymmetric => {
                if self.support.contains(x) {
                    0.5 / SQRT_3
                } else {
                    0.0
                }
            }
            DistKind::StandardGaussian => normal_pdf(x),
            DistKind::Tabulated => self.table.as_ref().unwrap().pdf(x),
        }
    }

    /// Kink locations of the density (knots for tabulated, edges for uniform).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            DistKind::UniformSymmetric => vec![self.support.lo, self.support.hi],
            DistKind::StandardGaussian => vec![0.0],
            DistKind::Tabulated => self.table.as_ref().unwrap().gamma.clone(),
        }
    }

    /// `E[γ^order · 1{γ ∈ set}]`.
    pub fn partial_moment(&self, order: u32, set: &Interval) -> Result<f64> {
        let m = self.partial_moments(set)?;
        match order {
            0 => Ok(m.c0),
            1 => Ok(m.c1),
            2 => Ok(m.c2),
            k => Err(Error::UnsupportedOrder(k)),
        }
    }

    pub fn partial_moments(&self, set: &Interval) -> Result<PartialMoments> {
        let set = Interval::new(set.lo, set.hi)?;
        Ok(self.moments_unchecked(&set))
    }

    pub(crate) fn moments_unchecked(&self, set: &Interval) -> PartialMoments {
        if !(set.hi > set.lo) {
            return PartialMoments::default();
        }
        match self.kind {
            DistKind::UniformSymmetric => {
                let Some(s) = set.clip(&self.support) else {
                    return PartialMoments::default();
                };
                let dens = 0.5 / SQRT_3;
                PartialMoments {
                    c0: dens * (s.hi - s.lo),
                    c1: dens * (s.hi * s.hi - s.lo * s.lo) / 2.0,
                    c2: dens * (s.hi.powi(3) - s.lo.powi(3)) / 3.0,
                }
            }
            DistKind::StandardGaussian => gaussian_moments(set.lo, set.hi),
            DistKind::Tabulated => self.table.as_ref().unwrap().moments_over(set),
        }
    }

    /// Same moments by adaptive quadrature of `γ^k p(γ)`; kept as an
    /// independent route for verification.
    pub fn partial_moments_quadrature(&self, set: &Interval) -> Result<PartialMoments> {
        let set = Interval::new(set.lo, set.hi)?;
        let Some(s) = set.clip(&self.window) else {
            return Ok(PartialMoments::default());
        };
        let breaks = self.breakpoints();
        let q = |k: i32| quad::integrate(|x| x.powi(k) * self.pdf(x), s.lo, s.hi, &breaks, self.quad_tol);
        Ok(PartialMoments { c0: q(0), c1: q(1), c2: q(2) })
    }

    /// `E[f(γ)]` by adaptive quadrature over the integration window, split at
    /// the density's own kinks plus `extra_breaks`.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F, extra_breaks: &[f64]) -> f64 {
        let mut breaks = self.breakpoints();
        breaks.extend_from_slice(extra_breaks);
        quad::integrate(|x| f(x) * self.pdf(x), self.window.lo, self.window.hi, &breaks, self.quad_tol)
    }

    /// Whether the density is even, judged by `C_1` over the two half-lines.
    pub fn evenness_mismatch(&self) -> f64 {
        let pos = self.moments_unchecked(&Interval::above(0.0));
        let neg = self.moments_unchecked(&Interval::below(0.0));
        (pos.c1 + neg.c1).abs().max((pos.c0 - neg.c0).abs())
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.evenness_mismatch() <= tol
    }

    /// Largest `|γ|` of the support, or the integration window for
    /// unbounded supports.
    pub fn support_radius(&self) -> f64 {
        self.window.lo.abs().max(self.window.hi.abs())
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `P(γ > x)` for a standard normal.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

fn gaussian_moments(lo: f64, hi: f64) -> PartialMoments {
    // mass via the tail on the side that avoids cancellation
    let c0 = if lo >= 0.0 {
        normal_sf(lo) - normal_sf(hi)
    } else if hi <= 0.0 {
        normal_sf(-hi) - normal_sf(-lo)
    } else {
        1.0 - normal_sf(-lo) - normal_sf(hi)
    };
    let edge = |x: f64| if x.is_finite() { normal_pdf(x) } else { 0.0 };
    let x_edge = |x: f64| if x.is_finite() { x * normal_pdf(x) } else { 0.0 };
    PartialMoments { c0, c1: edge(lo) - edge(hi), c2: c0 + x_edge(lo) - x_edge(hi) }
}

/// Smallest symmetric cut `T` with `2·∫_T^∞ γ² φ(γ) dγ < eps`.
fn gaussian_truncation(eps: f64) -> f64 {
    let tail = |t: f64| 2.0 * (t * normal_pdf(t) + normal_sf(t));
    let (mut lo, mut hi) = (0.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Physical-to-normalized bookkeeping for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// `A = A2 − A1`
    pub range: f64,
    pub sigma_x: f64,
    pub noise_var: f64,
}

impl ChannelSpec {
    /// Normalized noise ratio `t = σv² / A²`.
    pub fn noise_ratio(&self) -> f64 {
        self.noise_var / (self.range * self.range)
    }

    /// `A² / σv²`
    pub fn dsnr(&self) -> f64 {
        self.range * self.range / self.noise_var
    }

    pub fn with_noise_var(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }
}

/// Offsets removed by [`normalize_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    /// Added to the physical input: `x = x_o + input`.
    pub input: f64,
    /// Subtracted from the physical output: `h = h_o − output`.
    pub output: f64,
}

impl Shift {
    pub fn input_to_normalized(&self, x_o: f64) -> f64 {
        x_o + self.input
    }

    pub fn output_to_physical(&self, h: f64) -> f64 {
        h + self.output
    }
}

/// Centers the input and moves the output range to `[0, A]`.
pub fn normalize_channel(mu_x: f64, sigma_x: f64, a1: f64, a2: f64) -> Result<(ChannelSpec, Shift)> {
    if !(sigma_x > 0.0) {
        return Err(Error::NonPositiveSigma(sigma_x));
    }
    if !(a2 > a1) {
        return Err(Error::DegenerateRange { a1, a2 });
    }
    let spec = ChannelSpec { range: a2 - a1, sigma_x, noise_var: 0.0 };
    Ok((spec, Shift { input: -mu_x, output: a1 }))
}

/// Affine standardization applied to a tabulated density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardization {
    pub mass: f64,
    pub mean: f64,
    pub std_dev: f64,
    /// `γ_new = (γ_old + shift) · scale`
    pub shift: f64,
    pub scale: f64,
}

#[derive(Debug, Clone)]
pub struct LoadedPdf {
    pub distribution: InputDistribution,
    /// Moments of the table as read.
    pub raw: Standardization,
    /// `Some` when renormalization was requested and applied.
    pub applied: Option<Standardization>,
}

/// Reads a `gamma,density` CSV into a piecewise-linear distribution.
///
/// With `renormalize`, the table is scaled to unit mass and affinely moved
/// to zero mean and unit variance; the applied shift and scale are logged
/// and returned.
pub fn load_tabulated_pdf<R: Read>(source: R, renormalize: bool) -> Result<LoadedPdf> {
    let (gamma, density) = read_two_column_csv(source, "gamma", "density")?;
    let table = PdfTable::new(gamma, density)?;

    let m = table.raw_moments();
    let mean = m.c1 / m.c0;
    let var = m.c2 / m.c0 - mean * mean;
    let std_dev = var.max(0.0).sqrt();
    let raw = Standardization { mass: m.c0, mean, std_dev, shift: -mean, scale: 1.0 / std_dev };

    if !renormalize {
        if (m.c0 - 1.0).abs() > 1e-9 || mean.abs() > 1e-6 || (var - 1.0).abs() > 1e-6 {
            log::warn!(
                "tabulated pdf is not standardized (mass {:.6}, mean {:.6}, var {:.6}); results assume it is",
                m.c0,
                mean,
                var
            );
        }
        return Ok(LoadedPdf { distribution: InputDistribution::tabulated(table), raw, applied: None });
    }

    if !(std_dev > 0.0) {
        return Err(Error::ZeroMass);
    }
    let gamma = table.gamma.iter().map(|g| (g - mean) / std_dev).collect();
    let density = table.density.iter().map(|d| d * std_dev / m.c0).collect();
    let table = PdfTable::new(gamma, density)?;
    log::info!("standardized tabulated pdf: shift {:.9}, scale {:.9}, mass {:.9}", raw.shift, raw.scale, m.c0);
    Ok(LoadedPdf { distribution: InputDistribution::tabulated(table), raw, applied: Some(raw) })
}

pub(crate) fn read_two_column_csv<R: Read>(source: R, first: &str, second: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(source);
    let headers = rdr.headers()?.clone();
    let expected = format!("{first},{second}");
    let found = headers.iter().collect::<Vec<_>>().join(",");
    if headers.len() != 2 || &headers[0] != first || &headers[1] != second {
        return Err(Error::BadHeader { expected, found });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("row {}: cannot parse `{}`", row + 1, &rec[i])))
        };
        xs.push(parse(0)?);
        ys.push(parse(1)?);
    }
    Ok((xs, ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((SQRT_3 * SQRT_3 - 3.0).abs() < 1e-15);
        assert!((INV_SQRT_2PI - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn normalize_identity() {
        let (spec, shift) = normalize_channel(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(spec.range, 1.0);
        assert_eq!(shift.input, 0.0);
        assert_eq!(shift.output, 0.0);
    }

    #[test]
    fn normalize_led_operating_point() {
        let (spec, shift) = normalize_channel(2.5, 0.5, 3.0, 7.0).unwrap();
        assert_eq!(spec.range, 4.0);
        assert_eq!(shift.input, -2.5);
        assert_eq!(shift.input_to_normalized(2.5), 0.0);
        assert_eq!(shift.output_to_physical(0.0), 3.0);
    }

    #[test]
    fn normalize_rejects_degenerate() {
        assert!(matches!(normalize_channel(0.0, 1.0, 1.0, 1.0), Err(Error::DegenerateRange { .. })));
        assert!(matches!(normalize_channel(0.0, 0.0, 0.0, 1.0), Err(Error::NonPositiveSigma(_))));
        assert!(matches!(normalize_channel(0.0, -1.0, 0.0, 1.0), Err(Error::NonPositiveSigma(_))));
    }

    #[test]
    fn gaussian_first_moment_of_upper_half() {
        let v = InputDistribution::gaussian().partial_moment(1, &Interval::above(0.0)).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn uniform_unit_variance() {
        let v = InputDistribution::uniform().partial_moment(2, &Interval::real_line()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_upper_mass_matches_closed_form() {
        let eta = 1.0;
        let v = InputDistribution::uniform().partial_moment(0, &Interval::new(0.5 * eta, SQRT_3).unwrap()).unwrap();
        let expected = (SQRT_3 - 0.5 * eta) / (2.0 * SQRT_3);
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.3557).abs() < 1e-4);
    }

    #[test]
    fn rejects_reversed_interval_and_bad_order() {
        let d = InputDistribution::gaussian();
        assert!(matches!(d.partial_moment(0, &Interval { lo: 1.0, hi: 0.0 }), Err(Error::MalformedInterval { .. })));
        assert!(matches!(d.partial_moment(3, &Interval::real_line()), Err(Error::UnsupportedOrder(3))));
    }

    #[test]
    fn gaussian_closed_form_agrees_with_quadrature() {
        let d = InputDistribution::gaussian();
        for (lo, hi) in [(-1.0, 0.3), (0.5, f64::INFINITY), (f64::NEG_INFINITY, -2.2), (3.0, 6.5)] {
            let set = Interval::new(lo, hi).unwrap();
            let a = d.partial_moments(&set).unwrap();
            let b = d.partial_moments_quadrature(&set).unwrap();
            assert!((a.c0 - b.c0).abs() < 1e-13, "{lo} {hi}");
            assert!((a.c1 - b.c1).abs() < 1e-13);
            assert!((a.c2 - b.c2).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_truncation_is_tight() {
        let d = InputDistribution::gaussian();
        let t = d.window().hi;
        assert!(t > 7.0 && t < 10.0);
        let tail = gaussian_moments(t, f64::INFINITY);
        assert!(2.0 * tail.c2 <= DEFAULT_TAIL_EPSILON * 1.0001);
    }

    fn csv_of(rows: &[(f64, f64)]) -> String {
        let mut s = String::from("gamma,density\n");
        for (g, d) in rows {
            s.push_str(&format!("{g},{d}\n"));
        }
        s
    }

    #[test]
    fn loader_rejects_short_table() {
        let e = load_tabulated_pdf(csv_of(&[(0.0, 1.0), (1.0, 1.0)]).as_bytes(), false).unwrap_err();
        assert!(matches!(e, Error::TooFewKnots { .. }));
    }

    #[test]
    fn loader_rejects_bad_tables() {
        let mut rows: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 1.0)).collect();
        rows[4].0 = 2.5;
        assert!(matches!(load_tabulated_pdf(csv_of(&rows).as_bytes(), false), Err(Error::NonMonotoneGrid { .. })));

        let mut rows: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 1.0)).collect();
        rows[3].1 = -0.1;
        assert!(matches!(
            load_tabulated_pdf(csv_of(&rows).as_bytes(), false),
            Err(Error::NegativeDensity { row: 3, .. })
        ));

        let rows: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.0)).collect();
        assert!(matches!(load_tabulated_pdf(csv_of(&rows).as_bytes(), true), Err(Error::ZeroMass)));

        assert!(matches!(load_tabulated_pdf("x,y\n".as_bytes(), false), Err(Error::BadHeader { .. })));
    }

    #[test]
    fn loader_uniform_table_is_standard() {
        let rows: Vec<(f64, f64)> =
            (0..100).map(|i| (-SQRT_3 + 2.0 * SQRT_3 * i as f64 / 99.0, 0.5 / SQRT_3)).collect();
        let loaded = load_tabulated_pdf(csv_of(&rows).as_bytes(), false).unwrap();
        let d = loaded.distribution;
        let m = d.partial_moments_quadrature(&Interval::real_line()).unwrap();
        assert!((m.c0 - 1.0).abs() < 1e-9);
        assert!(m.c1.abs() < 1e-6);
        assert!((m.c2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn loader_renormalizes_half_density() {
        // triangle on [1, 5], half the mass it should have
        let rows: Vec<(f64, f64)> = (0..=16)
            .map(|i| {
                let g = 1.0 + 0.25 * i as f64;
                (g, 0.125 * (1.0 - (g - 3.0).abs() / 2.0))
            })
            .collect();
        let loaded = load_tabulated_pdf(csv_of(&rows).as_bytes(), true).unwrap();
        assert!((loaded.raw.mass - 0.25).abs() < 1e-12);
        let applied = loaded.applied.unwrap();
        assert!((applied.shift + 3.0).abs() < 1e-12);
        let m = loaded.distribution.partial_moments(&Interval::real_line()).unwrap();
        assert!((m.c0 - 1.0).abs() < 1e-9);
        assert!(m.c1.abs() < 1e-12);
        assert!((m.c2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tabulated_quantile_inverts_cdf() {
        let rows: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let g = -3.0 + 0.3 * i as f64;
                (g, normal_pdf(g))
            })
            .collect();
        let d = load_tabulated_pdf(csv_of(&rows).as_bytes(), true).unwrap().distribution;
        let t = d.table().unwrap();
        for k in 1..50 {
            let u = k as f64 / 50.0;
            assert!((t.cdf(t.quantile(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn evenness() {
        assert!(InputDistribution::uniform().is_even(1e-12));
        assert!(InputDistribution::gaussian().is_even(1e-12));
    }
}
