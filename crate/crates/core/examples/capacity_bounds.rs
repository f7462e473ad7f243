//! Lower and upper capacity bounds for an amplitude-limited channel with
//! Gaussian signalling, in bits per channel use.

use sndr_limiter::capacity::{bounds, LogBase};
use sndr_limiter::mapping::NonlinearMapping;

fn main() -> sndr_limiter::Result<()> {
    let fixed = NonlinearMapping::fixed_reference();
    println!("{:>7} {:>10} {:>10} {:>10}", "dsnr_db", "fixed", "optimal", "upper");
    for dsnr_db in (-10..=50).step_by(5) {
        let dsnr = 10f64.powf(dsnr_db as f64 / 10.0);
        let opt = bounds(dsnr, None, LogBase::Bits)?;
        let g2 = bounds(dsnr, Some(&fixed), LogBase::Bits)?;
        println!("{dsnr_db:>7} {:>10.4} {:>10.4} {:>10.4}", g2.lower(), opt.lower(), opt.upper());
    }
    Ok(())
}
