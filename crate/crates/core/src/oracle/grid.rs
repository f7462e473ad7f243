use rayon::prelude::*;

use crate::dist::InputDistribution;
use crate::error::{Error, Result};
use crate::mapping::{bussgang, NonlinearMapping};

/// `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if points == 0 || !(stop >= start) {
            return Err(Error::InvalidArgument(format!("bad grid [{start}, {stop}] x {points}")));
        }
        Ok(Self { start, stop, points })
    }

    pub fn step(&self) -> f64 {
        if self.points > 1 {
            (self.stop - self.start) / (self.points - 1) as f64
        } else {
            0.0
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.points == 1 {
            self.start
        } else {
            self.start + self.step() * i as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResult {
    pub eta: f64,
    pub beta: f64,
    pub sndr: f64,
    pub eta_step: f64,
    pub beta_step: f64,
}

impl GridResult {
    /// Whether `(eta, beta)` lies within one grid cell of the argmax.
    pub fn within_one_cell(&self, eta: f64, beta: f64) -> bool {
        let slack = 1e-12;
        (self.eta - eta).abs() <= self.eta_step + slack && (self.beta - beta).abs() <= self.beta_step + slack
    }
}

/// Evaluates the limiter SNDR by quadrature at every grid point and returns
/// the best. Ties go to the lowest flat index, so the result does not
/// depend on thread scheduling. Grid points with `η = 0` are skipped.
pub fn grid_search(dist: &InputDistribution, t: f64, eta_grid: Grid, beta_grid: Grid) -> Result<GridResult> {
    if eta_grid.points < 64 || beta_grid.points < 64 {
        log::debug!("coarse oracle grid: {} x {}", eta_grid.points, beta_grid.points);
    }
    let n = eta_grid.points * beta_grid.points;
    let best = (0..n)
        .into_par_iter()
        .filter_map(|k| {
            let eta = eta_grid.value(k / beta_grid.points);
            let beta = beta_grid.value(k % beta_grid.points);
            let m = NonlinearMapping::optimal_limiter(eta, beta).ok()?;
            let s = bussgang(&m, dist, t).ok()?.sndr.linear();
            Some((k, eta, beta, s))
        })
        .reduce_with(|a, b| if b.3 > a.3 || (b.3 == a.3 && b.0 < a.0) { b } else { a })
        .ok_or_else(|| Error::InvalidArgument("grid has no valid limiter points".into()))?;
    Ok(GridResult { eta: best.1, beta: best.2, sndr: best.3, eta_step: eta_grid.step(), beta_step: beta_grid.step() })
}
