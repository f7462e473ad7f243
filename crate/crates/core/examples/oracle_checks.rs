//! Independent checks that the solver's limiter really is optimal: a grid
//! search, set and bump perturbations, and a Monte Carlo estimate.

use sndr_limiter::dist::InputDistribution;
use sndr_limiter::mapping::bussgang;
use sndr_limiter::oracle::{grid_search, monte_carlo_sndr, random_slivers, stationarity_fit, Grid, SetCase};
use sndr_limiter::solver::{solve_general, Branch};

fn main() -> sndr_limiter::Result<()> {
    let input = InputDistribution::gaussian();
    let t = 0.01;
    let seed = 7;
    let out = solve_general(&input, t, Branch::Positive)?;
    let star = out.sndr_star.linear();
    println!("solver: eta {:.6}, beta {:.6}, SNDR {star:.6}", out.params.eta, out.params.beta);

    let grid = grid_search(&input, t, Grid::new(0.1, 6.0, 128)?, Grid::new(0.0, 1.0, 128)?)?;
    println!(
        "grid:   eta {:.6}, beta {:.6}, SNDR {:.6} (within one cell: {})",
        grid.eta,
        grid.beta,
        grid.sndr,
        grid.within_one_cell(out.params.eta, out.params.beta)
    );

    for case in [SetCase::IntoLower, SetCase::IntoUpper, SetCase::HalfLine] {
        let reports = random_slivers(&input, t, &out.params, case, 200, seed)?;
        let worst = reports.iter().map(|r| r.delta()).fold(f64::NEG_INFINITY, f64::max);
        println!("{case:?}: 200 slivers, best change {worst:.3e}");
    }

    let fit = stationarity_fit(&input, t, &out.params, &[0.04, 0.02, 0.01, 0.005, 0.0025], 16, seed)?;
    println!("bumps: |ΔSNDR| ∝ scale^{:.3} (R² {:.5})", fit.slope, fit.r_squared);

    let m = out.params.mapping();
    let mc = monte_carlo_sndr(&m, &input, t, 1_000_000, seed)?;
    let quad = bussgang(&m, &input, t)?.sndr.linear();
    println!("Monte Carlo {:.5} ± {:.5} vs quadrature {quad:.5}", mc.estimate, mc.std_error);
    Ok(())
}
