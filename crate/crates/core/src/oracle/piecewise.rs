//! Best piecewise-constant `g` on a fixed partition of the affine region,
//! found by coordinate ascent. Rails outside the region are kept.

use crate::dist::{InputDistribution, Interval, PartialMoments};
use crate::error::{Error, Result};
use crate::solver::LimiterParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseResult {
    pub sndr: f64,
    pub levels: Vec<f64>,
    pub sweeps: usize,
}

struct State {
    /// `E[γ g]`, `E[g]`, `E[g²]`
    a: f64,
    b: f64,
    c: f64,
}

fn ratio(a: f64, b: f64, c: f64, t: f64) -> f64 {
    a * a / (c - b * b - a * a + t)
}

/// Splits the affine region of `params` into `segments` equal pieces and
/// maximizes SNDR over one constant level per piece.
///
/// With the other levels fixed, SNDR is a ratio of two quadratics in the
/// free level whose interior stationary point solves a linear equation, so
/// each coordinate update is closed form.
pub fn piecewise_constant_oracle(
    dist: &InputDistribution,
    t: f64,
    params: &LimiterParams,
    segments: usize,
    sweeps: usize,
) -> Result<PiecewiseResult> {
    if segments == 0 {
        return Err(Error::InvalidArgument("need at least one segment".into()));
    }
    let regions = params.regions();
    let s = regions.affine;
    let w = dist.window();
    let (lo, hi) = (s.lo.max(w.lo), s.hi.min(w.hi));
    if !(hi > lo) {
        return Err(Error::InvalidArgument("affine region has no mass".into()));
    }
    let seg: Vec<PartialMoments> = (0..segments)
        .map(|k| {
            let a = lo + (hi - lo) * k as f64 / segments as f64;
            let b = lo + (hi - lo) * (k + 1) as f64 / segments as f64;
            dist.moments_unchecked(&Interval { lo: a, hi: b })
        })
        .collect();
    let upper = dist.moments_unchecked(&regions.upper);
    let m = params.mapping();
    let mut levels: Vec<f64> =
        (0..segments).map(|k| m.eval(lo + (hi - lo) * (k as f64 + 0.5) / segments as f64)).collect();

    let mut st = State { a: upper.c1, b: upper.c0, c: upper.c0 };
    for (v, mk) in levels.iter().zip(&seg) {
        st.a += v * mk.c1;
        st.b += v * mk.c0;
        st.c += v * v * mk.c0;
    }

    let mut done = 0;
    for sweep in 0..sweeps {
        let mut moved: f64 = 0.0;
        for (k, mk) in seg.iter().enumerate() {
            let v_old = levels[k];
            let (m0, m1) = (mk.c0, mk.c1);
            if m0 <= 0.0 {
                continue;
            }
            // moments without segment k
            let a = st.a - v_old * m1;
            let b = st.b - v_old * m0;
            let c = st.c - v_old * v_old * m0;
            let q2 = m0 - m0 * m0 - m1 * m1;
            let q1 = -2.0 * b * m0 - 2.0 * a * m1;
            let q0 = c - b * b - a * a + t;

            let eval = |v: f64| ratio(a + v * m1, b + v * m0, c + v * v * m0, t);
            let mut best = (v_old, eval(v_old));
            let den = m1 * q1 - 2.0 * a * q2;
            let mut candidates = vec![0.0, 1.0];
            if den != 0.0 {
                candidates.push(((a * q1 - 2.0 * m1 * q0) / den).clamp(0.0, 1.0));
            }
            for v in candidates {
                let r = eval(v);
                if r > best.1 {
                    best = (v, r);
                }
            }
            let v_new = best.0;
            levels[k] = v_new;
            st.a = a + v_new * m1;
            st.b = b + v_new * m0;
            st.c = c + v_new * v_new * m0;
            moved = moved.max((v_new - v_old).abs());
        }
        done = sweep + 1;
        if moved < 1e-14 {
            break;
        }
    }
    Ok(PiecewiseResult { sndr: ratio(st.a, st.b, st.c, t), levels, sweeps: done })
}
