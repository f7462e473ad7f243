//! Predistortion lookup tables: choose the drive `f(γ)` so that a device
//! with transfer curve `u` realizes a target mapping, `u(f(γ)) = g(γ)`.

use std::io::{Read, Write};

use crate::dist::read_two_column_csv;
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::mapping::NonlinearMapping;

/// Consecutive normalized outputs must rise by at least this much.
pub const STRICTNESS: f64 = 1e-9;
const COVER_TOL: f64 = 1e-12;

/// A strictly increasing device transfer curve `u: drive → [0, 1]`,
/// interpolated with a monotone cubic.
#[derive(Debug, Clone)]
pub struct DeviceCurve {
    curve: MonotoneCubic,
}

impl DeviceCurve {
    /// Outputs must already be normalized and span `[0, 1]`.
    pub fn new(drive: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        validate(&drive, &output)?;
        let (lo, hi) = (output[0], *output.last().unwrap());
        if lo > COVER_TOL || hi < 1.0 - COVER_TOL {
            return Err(Error::DeviceRangeNotCovered { lo, hi });
        }
        Ok(Self { curve: MonotoneCubic::new(drive, output) })
    }

    /// Rescales outputs so the turn-on level maps to 0 and saturation to 1.
    pub fn normalized(drive: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        validate(&drive, &output)?;
        let (lo, hi) = (output[0], *output.last().unwrap());
        let output: Vec<f64> = output.iter().map(|o| (o - lo) / (hi - lo)).collect();
        Self::new(drive, output)
    }

    pub fn output(&self, drive: f64) -> f64 {
        self.curve.eval(drive)
    }

    /// Drive level producing normalized output `y`.
    pub fn drive_for(&self, y: f64) -> f64 {
        self.curve.inverse_increasing(y)
    }

    pub fn drive_range(&self) -> (f64, f64) {
        let xs = self.curve.xs();
        (xs[0], xs[xs.len() - 1])
    }
}

fn validate(drive: &[f64], output: &[f64]) -> Result<()> {
    if drive.len() != output.len() || drive.len() < 2 {
        return Err(Error::InvalidArgument("device curve needs ≥ 2 matching knots".into()));
    }
    if let Some(i) = drive.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotoneDevice { index: i + 1 });
    }
    let (lo, hi) = (output[0], *output.last().unwrap());
    if !(hi > lo) {
        return Err(Error::NonMonotoneDevice { index: output.len() - 1 });
    }
    let span = hi - lo;
    if let Some(i) = output.windows(2).position(|w| !((w[1] - w[0]) / span >= STRICTNESS)) {
        return Err(Error::NonMonotoneDevice { index: i + 1 });
    }
    Ok(())
}

/// Reads a `drive,output` CSV. With `normalize`, outputs are rescaled to
/// `[0, 1]`; otherwise they must already cover it.
pub fn load_device_curve<R: Read>(source: R, normalize: bool) -> Result<DeviceCurve> {
    let (drive, output) = read_two_column_csv(source, "drive", "output")?;
    if normalize {
        DeviceCurve::normalized(drive, output)
    } else {
        DeviceCurve::new(drive, output)
    }
}

#[derive(Debug, Clone)]
pub struct PredistortionLut {
    table: MonotoneCubic,
}

impl PredistortionLut {
    pub fn gamma(&self) -> &[f64] {
        self.table.xs()
    }

    pub fn drive(&self) -> &[f64] {
        self.table.ys()
    }

    /// Interpolated drive; the end entries hold beyond the table (the rails).
    pub fn drive_at(&self, gamma: f64) -> f64 {
        self.table.eval(gamma)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["gamma", "drive"])?;
        for (g, d) in self.gamma().iter().zip(self.drive()) {
            wtr.write_record([g.to_string(), d.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Builds the `γ → drive` table for target `m` over the region where `m`
/// is not on a rail, sampling `n_points` evenly and adding every knee.
pub fn predistort_curve(device: &DeviceCurve, m: &NonlinearMapping, n_points: usize) -> Result<PredistortionLut> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 LUT points, got {n_points}")));
    }
    let knees = m.knees();
    let (Some(&lo), Some(&hi)) = (knees.first(), knees.last()) else {
        return Err(Error::InvalidMapping("mapping has no transition region to predistort".into()));
    };
    if !(hi > lo) {
        return Err(Error::InvalidMapping("mapping transition region is empty".into()));
    }

    // Even spacing in γ alone undersamples where the device is flat (turn-on,
    // saturation) and its inverse is steep, so every device knot's preimage
    // is added too.
    let (g_lo, g_hi) = (m.eval(lo), m.eval(hi));
    let preimages = device.curve.ys().iter().filter_map(|&y| {
        let inside = (y - g_lo) * (y - g_hi) < 0.0;
        inside.then(|| preimage(m, y, lo, hi))
    });
    let mut gamma: Vec<f64> = (0..n_points)
        .map(|i| lo + (hi - lo) * i as f64 / (n_points - 1) as f64)
        .chain(knees.iter().copied())
        .chain(preimages)
        .collect();
    gamma.sort_by(f64::total_cmp);
    let min_gap = 1e-12 * (hi - lo);
    gamma.dedup_by(|b, a| (*b - *a).abs() <= min_gap);

    let drive = gamma.iter().map(|&x| device.drive_for(m.eval(x))).collect();
    Ok(PredistortionLut { table: MonotoneCubic::new(gamma, drive) })
}

/// `γ` in `[lo, hi]` with `m(γ) = y`, by bisection; `m(lo)` and `m(hi)`
/// must bracket `y`.
fn preimage(m: &NonlinearMapping, y: f64, mut lo: f64, mut hi: f64) -> f64 {
    let rising = m.eval(hi) > m.eval(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (m.eval(mid) < y) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sup-norm of `u(f(γ)) − g(γ)` over `probes` evenly spaced points that
/// extend one unit past the table on each side.
pub fn composition_error(device: &DeviceCurve, lut: &PredistortionLut, m: &NonlinearMapping, probes: usize) -> f64 {
    let g = lut.gamma();
    let (lo, hi) = (g[0] - 1.0, g[g.len() - 1] + 1.0);
    (0..probes)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (probes.max(2) - 1) as f64;
            (device.output(lut.drive_at(x)) - m.eval(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }

    #[test]
    fn identity_device_reproduces_target() {
        let v = grid(32);
        let dev = DeviceCurve::new(v.clone(), v).unwrap();
        let m = NonlinearMapping::optimal_limiter(2.0, 0.5).unwrap();
        let lut = predistort_curve(&dev, &m, 65).unwrap();
        for (x, d) in lut.gamma().iter().zip(lut.drive()) {
            assert!((d - m.eval(*x)).abs() < 1e-12);
        }
        assert!(composition_error(&dev, &lut, &m, 10_000) < 1e-9);
    }

    #[test]
    fn square_law_inverse() {
        let v = grid(16);
        let out: Vec<f64> = v.iter().map(|x| x * x).collect();
        let dev = DeviceCurve::new(v, out).unwrap();
        assert!((dev.drive_for(0.25) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_monotone_device() {
        let e = DeviceCurve::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.6, 0.5]).unwrap_err();
        assert!(matches!(e, Error::NonMonotoneDevice { .. }));
        let e = DeviceCurve::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 0.5 + 1e-12]).unwrap_err();
        assert!(matches!(e, Error::NonMonotoneDevice { .. }));
    }

    #[test]
    fn rejects_partial_range() {
        let e = DeviceCurve::new(vec![0.0, 0.5, 1.0], vec![0.1, 0.5, 0.9]).unwrap_err();
        assert!(matches!(e, Error::DeviceRangeNotCovered { .. }));
        assert!(DeviceCurve::normalized(vec![0.0, 0.5, 1.0], vec![0.1, 0.5, 0.9]).is_ok());
    }

    #[test]
    fn constant_target_rejected() {
        let v = grid(8);
        let dev = DeviceCurve::new(v.clone(), v).unwrap();
        let m = NonlinearMapping::constant(0.5).unwrap();
        assert!(predistort_curve(&dev, &m, 16).is_err());
    }
}
