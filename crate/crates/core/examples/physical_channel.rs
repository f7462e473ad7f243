//! From physical units to the normalized problem and back: an LED driven
//! around a 350 mA bias with turn-on at 100 mA and saturation at 600 mA.

use sndr_limiter::dist::{normalize_channel, InputDistribution};
use sndr_limiter::mapping::{bussgang, sndr_physical};
use sndr_limiter::solver::{solve_symmetric, Branch};

fn main() -> sndr_limiter::Result<()> {
    let (mu_x, sigma_x) = (350.0, 90.0);
    let (turn_on, saturation) = (100.0, 600.0);
    let noise_var = 400.0;

    let (channel, shift) = normalize_channel(mu_x, sigma_x, turn_on, saturation)?;
    let channel = channel.with_noise_var(noise_var);
    let t = channel.noise_ratio();
    println!("A = {}, DSNR = {:.2} dB, t = {t:.3e}", channel.range, 10.0 * channel.dsnr().log10());

    let input = InputDistribution::gaussian();
    let limiter = solve_symmetric(&input, t, Branch::Positive)?.params;
    let m = limiter.mapping();

    // In physical terms the limiter clips the drive at these levels.
    let lo = limiter.lower_knee() * sigma_x - shift.input;
    let hi = limiter.upper_knee() * sigma_x - shift.input;
    println!("clip input outside [{lo:.1}, {hi:.1}] mA");
    for x_o in [lo - 50.0, lo, mu_x, hi, hi + 50.0] {
        let h = channel.range * m.eval(shift.input_to_normalized(x_o) / sigma_x);
        println!("  x = {x_o:>6.1} → output {:>6.1}", shift.output_to_physical(h));
    }

    println!(
        "SNDR normalized {:.6}, physical {:.6}",
        bussgang(&m, &input, t)?.sndr.linear(),
        sndr_physical(&m, &input, &channel).linear()
    );
    Ok(())
}
