use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stream_rng;
use crate::dist::{DistKind, InputDistribution, SQRT_3};
use crate::error::{Error, Result};
use crate::mapping::NonlinearMapping;

pub const MIN_SAMPLES: usize = 10_000;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Delta-method standard error of `estimate`.
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Running sums of `(γ·y, y, y²)` with `y = g(γ) − shift`, plus their
/// cross products for the covariance.
#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    n: f64,
    s: [f64; 3],
    ss: [[f64; 3]; 3],
}

impl Sums {
    fn push(&mut self, v: [f64; 3]) {
        self.n += 1.0;
        for i in 0..3 {
            self.s[i] += v[i];
            for j in 0..3 {
                self.ss[i][j] += v[i] * v[j];
            }
        }
    }

    fn merge(mut self, o: &Sums) -> Self {
        self.n += o.n;
        for i in 0..3 {
            self.s[i] += o.s[i];
            for j in 0..3 {
                self.ss[i][j] += o.ss[i][j];
            }
        }
        self
    }
}

fn draw(dist: &InputDistribution, rng: &mut impl Rng) -> f64 {
    match dist.kind() {
        DistKind::UniformSymmetric => rng.random_range(-SQRT_3..SQRT_3),
        DistKind::StandardGaussian => rng.sample(StandardNormal),
        DistKind::Tabulated => dist.table().unwrap().quantile(rng.random::<f64>()),
    }
}

/// Sampling estimate of `E²[γg] / (var[g] − E²[γg] + t)`.
///
/// Samples are drawn in fixed-size chunks, each from its own stream of
/// `seed`, and reduced in chunk order, so the estimate is identical for a
/// given seed regardless of thread count. Values of `g` are centered on
/// `g(0)` before accumulation; with `E[γ] = 0` this leaves every estimated
/// moment unchanged and makes a constant mapping estimate exactly zero.
pub fn monte_carlo_sndr(
    m: &NonlinearMapping,
    dist: &InputDistribution,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need ≥ {MIN_SAMPLES} samples, got {n_samples}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidNoise { expected: "≥ 0", got: t });
    }
    let shift = m.eval(0.0);
    let chunks = n_samples.div_ceil(CHUNK);
    let partial: Vec<Sums> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let len = CHUNK.min(n_samples - c * CHUNK);
            let mut s = Sums::default();
            for _ in 0..len {
                let x = draw(dist, &mut rng);
                let y = m.eval(x) - shift;
                s.push([x * y, y, y * y]);
            }
            s
        })
        .collect();
    let total = partial.iter().fold(Sums::default(), |acc, s| acc.merge(s));

    let n = total.n;
    let mean = total.s.map(|v| v / n);
    let [a, b, c] = mean;
    let denom = c - b * b - a * a + t;
    let estimate = if a == 0.0 { 0.0 } else { a * a / denom };

    let d2 = denom * denom;
    let grad = [2.0 * a * (denom + a * a) / d2, 2.0 * a * a * b / d2, -a * a / d2];
    let mut var = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let cov = (total.ss[i][j] - n * mean[i] * mean[j]) / (n - 1.0);
            var += grad[i] * cov * grad[j];
        }
    }
    let std_error = if a == 0.0 { 0.0 } else { (var / n).max(0.0).sqrt() };
    Ok(McEstimate { estimate, std_error, n_samples, seed })
}
