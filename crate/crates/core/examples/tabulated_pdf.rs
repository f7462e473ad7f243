//! A skewed input read from a density table. Its optimum is not biased at
//! the midpoint, and the solver may find more than one fixed point.

use sndr_limiter::dist::load_tabulated_pdf;
use sndr_limiter::solver::{solve_general, Branch};

fn main() -> sndr_limiter::Result<()> {
    // Gamma(2, 1): mean 2, variance 2, long right tail.
    let mut table = String::from("gamma,density\n");
    for i in 0..=120 {
        let x = i as f64 * 0.1;
        table.push_str(&format!("{x},{}\n", x * (-x).exp()));
    }
    let loaded = load_tabulated_pdf(table.as_bytes(), true)?;
    if let Some(s) = loaded.applied {
        println!("standardized: mean {:.4}, std {:.4} (mass {:.6})", s.mean, s.std_dev, s.mass);
    }
    let input = loaded.distribution;

    for dsnr_db in [5.0, 15.0, 25.0] {
        let t = 10f64.powf(-dsnr_db / 10.0);
        for branch in [Branch::Positive, Branch::Negative] {
            let out = solve_general(&input, t, branch)?;
            println!(
                "{dsnr_db:>4} dB {branch:>8}: eta {:>8.4}, beta {:.4}, SNDR {:.3} dB, {} fixed point(s)",
                out.params.eta,
                out.params.beta,
                out.sndr_star.db(),
                out.fixed_points.len()
            );
        }
    }
    Ok(())
}
