//! Shape-preserving piecewise-cubic Hermite interpolation (Fritsch–Carlson).

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing and at least two points long.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len());
        let n = xs.len();
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();

        let mut slopes = vec![0.0; n];
        slopes[0] = endpoint_slope(xs[1] - xs[0], xs.get(2).map(|x| x - xs[1]), secants[0], secants.get(1));
        slopes[n - 1] = endpoint_slope(
            xs[n - 1] - xs[n - 2],
            (n > 2).then(|| xs[n - 2] - xs[n - 3]),
            secants[n - 2],
            (n > 2).then(|| &secants[n - 3]),
        );
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            if d0 * d1 <= 0.0 {
                slopes[i] = 0.0;
            } else {
                // weighted harmonic mean
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                slopes[i] = (w0 + w1) / (w0 / d0 + w1 / d1);
            }
        }
        Self { xs, ys, slopes }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn segment(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&k| k <= x);
        i.clamp(1, self.xs.len() - 1) - 1
    }

    /// Evaluates the interpolant; constant extension outside the knots.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        self.eval_in(self.segment(x), x)
    }

    fn eval_in(&self, i: usize, x: f64) -> f64 {
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Inverse of an increasing interpolant: the `x` with `eval(x) == y`.
    /// Targets outside the value range map to the end knots.
    pub fn inverse_increasing(&self, y: f64) -> f64 {
        let n = self.xs.len();
        if y <= self.ys[0] {
            return self.xs[0];
        }
        if y >= self.ys[n - 1] {
            return self.xs[n - 1];
        }
        let i = self.ys.partition_point(|&k| k <= y).clamp(1, n - 1) - 1;
        let (mut lo, mut hi) = (self.xs[i], self.xs[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval_in(i, mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn endpoint_slope(h0: f64, h1: Option<f64>, d0: f64, d1: Option<&f64>) -> f64 {
    let (Some(h1), Some(&d1)) = (h1, d1) else {
        return d0;
    };
    // three-point one-sided estimate, limited to keep monotonicity
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_lines() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let c = MonotoneCubic::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert!((c.eval(*x) - y).abs() < 1e-14);
        }
        assert!((c.eval(1.05) - 1.1).abs() < 1e-12);
    }

    #[test]
    fn preserves_monotonicity() {
        let xs = vec![0.0, 0.1, 0.2, 1.0, 1.1, 3.0];
        let ys = vec![0.0, 0.0, 0.5, 0.51, 0.9, 1.0];
        let c = MonotoneCubic::new(xs, ys);
        let mut prev = c.eval(0.0);
        for k in 1..=3000 {
            let v = c.eval(k as f64 * 1e-3);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn inverse_round_trips() {
        let xs: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let c = MonotoneCubic::new(xs, ys);
        for k in 1..100 {
            let y = k as f64 / 100.0;
            assert!((c.eval(c.inverse_increasing(y)) - y).abs() < 1e-12);
        }
    }
}
