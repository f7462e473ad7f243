//! Optimal limiter for a uniform input, solved numerically and checked
//! against the closed-form gain.
//!
//! ```bash
//! cargo run --example solve_uniform
//! ```

use sndr_limiter::dist::InputDistribution;
use sndr_limiter::solver::{solve_general, solve_symmetric, uniform_eta_closed_form, Branch};

fn main() -> sndr_limiter::Result<()> {
    let input = InputDistribution::uniform();
    println!("{:>8} {:>12} {:>12} {:>8} {:>10}", "dsnr_db", "eta", "closed_form", "beta", "sndr_db");
    for dsnr_db in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let t = 10f64.powf(-dsnr_db / 10.0);
        let out = solve_symmetric(&input, t, Branch::Positive)?;
        let exact = uniform_eta_closed_form(t, Branch::Positive)?;
        println!(
            "{dsnr_db:>8.1} {:>12.9} {exact:>12.9} {:>8.4} {:>10.4}",
            out.params.eta,
            out.params.beta,
            out.sndr_star.db()
        );
    }

    // The negative branch is the same limiter flipped: g → 1 − g.
    let t = 0.1;
    let pos = solve_general(&input, t, Branch::Positive)?;
    let neg = solve_general(&input, t, Branch::Negative)?;
    println!("\nat 10 dB: positive eta {:.9}, negative eta {:.9}", pos.params.eta, neg.params.eta);
    println!(
        "knees: [{:.6}, {:.6}] and [{:.6}, {:.6}]",
        pos.params.lower_knee(),
        pos.params.upper_knee(),
        neg.params.upper_knee(),
        neg.params.lower_knee()
    );
    println!("SNDR equal across branches: {} vs {}", pos.sndr_star, neg.sndr_star);
    Ok(())
}
