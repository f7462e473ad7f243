//! Random search over valid mappings `ℝ → [0, 1]`.

use rand::Rng;
use rayon::prelude::*;

use super::stream_rng;
use crate::dist::InputDistribution;
use crate::error::{Error, Result};
use crate::mapping::{bussgang, NonlinearMapping};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSearch {
    pub best_sndr: f64,
    pub best: NonlinearMapping,
    pub trials: usize,
    pub seed: u64,
}

/// Draws one mapping: a clipped affine map, a limiter with arbitrary gain and
/// bias, or a random piecewise-linear curve, each with probability ⅓. Knots
/// fall within `radius` of the origin.
pub fn random_mapping<R: Rng>(rng: &mut R, radius: f64) -> NonlinearMapping {
    let r = radius.max(1e-3);
    match rng.random_range(0..3) {
        0 => {
            let slope = 10f64.powf(rng.random_range(-1.5..1.0)) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let intercept = rng.random_range(-0.5..1.5);
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            NonlinearMapping::affine_clipped(slope, intercept, lo, hi.max(lo + 1e-6).min(1.0))
                .unwrap_or_else(|_| NonlinearMapping::fixed_reference())
        }
        1 => {
            let eta = 10f64.powf(rng.random_range(-1.0..1.0)) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            NonlinearMapping::optimal_limiter(eta, rng.random_range(-0.5..1.5))
                .unwrap_or_else(|_| NonlinearMapping::fixed_reference())
        }
        _ => {
            let n = rng.random_range(4..=12);
            let mut knots: Vec<f64> = (0..n).map(|_| rng.random_range(-r..r)).collect();
            knots.sort_by(f64::total_cmp);
            knots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if knots.len() < 2 {
                knots = vec![-r, r];
            }
            let values = knots.iter().map(|_| rng.random::<f64>()).collect();
            NonlinearMapping::tabulated(knots, values).unwrap_or_else(|_| NonlinearMapping::fixed_reference())
        }
    }
}

/// Best SNDR over `trials` random mappings. Trial `i` draws from stream `i`
/// of `seed`, so the result does not depend on scheduling.
pub fn random_mapping_search(dist: &InputDistribution, t: f64, trials: usize, seed: u64) -> Result<RandomSearch> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let radius = dist.support_radius().min(6.0);
    let scored: Vec<(f64, NonlinearMapping)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let m = random_mapping(&mut stream_rng(seed, i as u64), radius);
            bussgang(&m, dist, t).map(|r| (r.sndr.linear(), m))
        })
        .collect::<Result<_>>()?;
    let (best_sndr, best) = scored.into_iter().reduce(|a, b| if b.0 > a.0 { b } else { a }).expect("trials > 0");
    Ok(RandomSearch { best_sndr, best, trials, seed })
}
