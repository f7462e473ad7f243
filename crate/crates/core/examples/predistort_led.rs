//! Build a predistortion table that makes a measured LED curve behave like
//! the optimal limiter, then check the cascade.
//!
//! The curve in `data/led_curve.csv` is 64 (drive current in mA, optical
//! power in mW) pairs with a soft turn-on near 12 mA and droop toward
//! 100 mA.

use std::fs::File;
use std::io::BufReader;

use sndr_limiter::dist::InputDistribution;
use sndr_limiter::predistort::{composition_error, load_device_curve, predistort_curve};
use sndr_limiter::solver::{solve_symmetric, Branch};

fn main() -> sndr_limiter::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/led_curve.csv");
    let led = load_device_curve(BufReader::new(File::open(path)?), true)?;

    let t = 10f64.powf(-25.0 / 10.0);
    let target = solve_symmetric(&InputDistribution::gaussian(), t, Branch::Positive)?.params;
    let m = target.mapping();
    let lut = predistort_curve(&led, &m, 129)?;

    println!(
        "target knees [{:.4}, {:.4}], {} table entries",
        target.lower_knee(),
        target.upper_knee(),
        lut.gamma().len()
    );
    for gamma in [-3.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0] {
        let drive = lut.drive_at(gamma);
        println!(
            "  γ = {gamma:>5.2}: drive {drive:>7.3} mA → output {:.4} (target {:.4})",
            led.output(drive),
            m.eval(gamma)
        );
    }
    println!("sup |u(f(γ)) − g(γ)| = {:.2e}", composition_error(&led, &lut, &m, 10_000));
    Ok(())
}
