//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` on `[lo, hi]` given `fdf(x) = (f(x), f'(x))`.
///
/// Newton steps are taken when they stay inside the current bracket and
/// shrink it fast enough; otherwise the step falls back to bisection.
pub fn safeguarded_newton<F>(fdf: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut a, mut b) = (lo, hi);
    let (fa, _) = fdf(a);
    let (fb, _) = fdf(b);
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::BracketFailure { lo, hi, f_lo: fa, f_hi: fb });
    }
    let rising = fb > 0.0;

    let mut x = 0.5 * (a + b);
    let mut last_width = b - a;
    for it in 1..=max_iter {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Ok(Root { x, residual: 0.0, iterations: it });
        }
        if (fx > 0.0) == rising {
            b = x;
        } else {
            a = x;
        }

        let newton = x - fx / dfx;
        let width = b - a;
        let inside = dfx != 0.0 && newton > a && newton < b;
        let shrinking = it <= 2 || width < 0.5 * last_width;
        let next = if inside && shrinking { newton } else { 0.5 * (a + b) };
        last_width = width;

        if (next - x).abs() <= xtol || width <= xtol {
            let (fr, _) = fdf(next);
            return Ok(Root { x: next, residual: fr, iterations: it });
        }
        x = next;
    }
    let (fr, _) = fdf(x);
    Ok(Root { x, residual: fr, iterations: max_iter })
}
