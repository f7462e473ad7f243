//! Why the optimum is affine between its knees: the best staircase on a
//! finer and finer partition creeps up on the limiter but never passes it.

use sndr_limiter::dist::InputDistribution;
use sndr_limiter::oracle::piecewise_constant_oracle;
use sndr_limiter::solver::{solve_symmetric, Branch};

fn main() -> sndr_limiter::Result<()> {
    let input = InputDistribution::gaussian();
    let t = 0.01;
    let out = solve_symmetric(&input, t, Branch::Positive)?;
    let star = out.sndr_star.linear();
    for segments in [2, 4, 8, 16, 32, 64] {
        let staircase = piecewise_constant_oracle(&input, t, &out.params, segments, 100)?;
        println!(
            "{segments:>3} steps: SNDR {:.6} (gap {:.2e}, {} sweeps)",
            staircase.sndr,
            star - staircase.sndr,
            staircase.sweeps
        );
    }
    println!("limiter: SNDR {star:.6}");
    Ok(())
}
