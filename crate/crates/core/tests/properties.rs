use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sndr_limiter::capacity::{lower_bound, rate_from_sndr, sndr_cap, upper_bound, LogBase};
use sndr_limiter::dist::{load_tabulated_pdf, normalize_channel, InputDistribution, Interval, PdfTable};
use sndr_limiter::mapping::{bussgang, sndr_physical, NonlinearMapping};
use sndr_limiter::oracle::{random_mapping, random_mapping_search};
use sndr_limiter::solver::{fixed_point_map, region_moments, solve_general, solve_symmetric, Branch, LimiterParams};

/// Symmetric triangle on `[−√6, √6]`: zero mean, unit variance.
fn triangle() -> InputDistribution {
    let a = 6f64.sqrt();
    let xs: Vec<f64> = (0..=8).map(|i| -a + a * i as f64 / 4.0).collect();
    let ys = xs.iter().map(|x| (a - x.abs()) / (a * a)).collect();
    InputDistribution::tabulated(PdfTable::new(xs, ys).unwrap())
}

/// Gamma(2, 1) density, standardized.
fn skewed() -> InputDistribution {
    let mut csv = String::from("gamma,density\n");
    for i in 0..=60 {
        let x = i as f64 * 0.2;
        csv.push_str(&format!("{x},{}\n", x * (-x).exp()));
    }
    load_tabulated_pdf(csv.as_bytes(), true).unwrap().distribution
}

fn all_dists() -> Vec<(&'static str, InputDistribution)> {
    vec![
        ("uniform", InputDistribution::uniform()),
        ("gaussian", InputDistribution::gaussian()),
        ("triangle", triangle()),
        ("skewed", skewed()),
    ]
}

fn symmetric_dists() -> Vec<InputDistribution> {
    vec![InputDistribution::uniform(), InputDistribution::gaussian(), triangle()]
}

fn sorted3(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let mut v = [a, b, c];
    v.sort_by(f64::total_cmp);
    (v[0], v[1], v[2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moments_are_additive(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        let (lo, mid, hi) = sorted3(a, b, c);
        for (name, d) in all_dists() {
            let whole = d.partial_moments(&Interval::new(lo, hi).unwrap()).unwrap();
            let left = d.partial_moments(&Interval::new(lo, mid).unwrap()).unwrap();
            let right = d.partial_moments(&Interval::new(mid, hi).unwrap()).unwrap();
            let sum = left + right;
            prop_assert!((whole.c0 - sum.c0).abs() < 1e-9, "{name} c0");
            prop_assert!((whole.c1 - sum.c1).abs() < 1e-9, "{name} c1");
            prop_assert!((whole.c2 - sum.c2).abs() < 1e-9, "{name} c2");
        }
    }

    #[test]
    fn three_way_partition_sums_to_unit_moments(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let (k1, k2) = if a < b { (a, b) } else { (b, a) };
        for (name, d) in all_dists() {
            let total = d.partial_moments(&Interval::below(k1)).unwrap()
                + d.partial_moments(&Interval::new(k1, k2).unwrap()).unwrap()
                + d.partial_moments(&Interval::above(k2)).unwrap();
            prop_assert!((total.c0 - 1.0).abs() < 1e-8, "{name}: {total:?}");
            prop_assert!(total.c1.abs() < 1e-8, "{name}: {total:?}");
            prop_assert!((total.c2 - 1.0).abs() < 1e-8, "{name}: {total:?}");
        }
    }

    #[test]
    fn closed_form_moments_match_quadrature(a in -4.0f64..4.0, w in 0.0f64..5.0) {
        for (name, d) in all_dists() {
            let set = Interval::new(a, a + w).unwrap();
            let exact = d.partial_moments(&set).unwrap();
            let quad = d.partial_moments_quadrature(&set).unwrap();
            prop_assert!((exact.c0 - quad.c0).abs() < 1e-9, "{name}");
            prop_assert!((exact.c1 - quad.c1).abs() < 1e-9, "{name}");
            prop_assert!((exact.c2 - quad.c2).abs() < 1e-9, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cauchy_schwarz_on_intervals(a in -6.0f64..6.0, w in 0.0f64..8.0) {
        for (name, d) in all_dists() {
            let m = d.partial_moments(&Interval::new(a, a + w).unwrap()).unwrap();
            prop_assert!(m.c1 * m.c1 <= m.c0 * m.c2 * (1.0 + 1e-12) + 1e-300, "{name}: {m:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn physical_and_normalized_sndr_agree(
        range in 0.1f64..50.0,
        sigma_x in 0.05f64..20.0,
        a1 in -10.0f64..10.0,
        t in 1e-4f64..2.0,
        seed in any::<u64>(),
    ) {
        let m = random_mapping(&mut ChaCha8Rng::seed_from_u64(seed), 3.0);
        let (chan, _) = normalize_channel(0.0, sigma_x, a1, a1 + range).unwrap();
        let chan = chan.with_noise_var(t * range * range);
        for d in [InputDistribution::uniform(), InputDistribution::gaussian()] {
            let normalized = bussgang(&m, &d, t).unwrap().sndr.linear();
            let physical = sndr_physical(&m, &d, &chan).linear();
            prop_assert!((normalized - physical).abs() <= 1e-9 * normalized.max(1.0), "{normalized} vs {physical}");
        }
    }

    #[test]
    fn distortion_is_uncorrelated_with_input(t in 1e-3f64..1.0, seed in any::<u64>()) {
        let m = random_mapping(&mut ChaCha8Rng::seed_from_u64(seed), 3.0);
        for (_, d) in all_dists() {
            let r = bussgang(&m, &d, t).unwrap();
            let corr = d.expect(|x| x * (m.eval(x) - r.mean_out - r.alpha * x), &m.knees());
            prop_assert!(corr.abs() < 1e-9, "{corr}");
            prop_assert!(r.distortion_power >= 0.0);
        }
    }

    #[test]
    fn more_noise_never_helps(t1 in 1e-4f64..1.0, dt in 0.0f64..1.0, seed in any::<u64>()) {
        let m = random_mapping(&mut ChaCha8Rng::seed_from_u64(seed), 3.0);
        for (_, d) in all_dists() {
            let s1 = bussgang(&m, &d, t1).unwrap().sndr.linear();
            let s2 = bussgang(&m, &d, t1 + dt).unwrap().sndr.linear();
            prop_assert!(s1 >= s2, "{s1} < {s2}");
        }
    }

    #[test]
    fn sndr_never_exceeds_quarter_dsnr(t in 1e-5f64..10.0, seed in any::<u64>()) {
        let m = random_mapping(&mut ChaCha8Rng::seed_from_u64(seed), 4.0);
        for (name, d) in all_dists() {
            let s = bussgang(&m, &d, t).unwrap().sndr.linear();
            prop_assert!(s <= sndr_cap(t) + 1e-9, "{name}: {s} > {}", sndr_cap(t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solution_is_a_fixed_point(log_t in -4.0f64..0.5, neg in any::<bool>()) {
        let t = 10f64.powf(log_t);
        let branch = if neg { Branch::Negative } else { Branch::Positive };
        for (name, d) in all_dists() {
            let out = solve_general(&d, t, branch).unwrap();
            let p = out.params;
            let next = fixed_point_map(&d, t, &p).unwrap();
            prop_assert!((next.eta - p.eta).abs() < 1e-9 * p.eta.abs().max(1.0), "{name}: {p:?} → {next:?}");
            prop_assert!((next.beta - p.beta).abs() < 1e-9, "{name}: {p:?} → {next:?}");

            // knee ordering and a non-empty affine region
            prop_assert_eq!(p.branch(), branch);
            let r = p.regions();
            prop_assert!(r.affine.lo < r.affine.hi);
            let (left, right) = if neg { (r.upper, r.lower) } else { (r.lower, r.upper) };
            prop_assert!(left.hi <= r.affine.lo && r.affine.hi <= right.lo);
            prop_assert!(out.sndr_star.linear() <= sndr_cap(t) + 1e-9);
        }
    }

    #[test]
    fn even_inputs_give_symmetric_regions(log_t in -4.0f64..0.5) {
        let t = 10f64.powf(log_t);
        for d in symmetric_dists() {
            let p = solve_symmetric(&d, t, Branch::Positive).unwrap().params;
            let rm = region_moments(&d, &p);
            prop_assert!(rm.affine.c1.abs() < 1e-8);
            prop_assert!((rm.upper.c0 - rm.lower.c0).abs() < 1e-8);
        }
    }

    #[test]
    fn branches_mirror(log_t in -4.0f64..0.5) {
        let t = 10f64.powf(log_t);
        for d in symmetric_dists() {
            let pos = solve_general(&d, t, Branch::Positive).unwrap();
            let neg = solve_general(&d, t, Branch::Negative).unwrap();
            prop_assert!((pos.params.eta + neg.params.eta).abs() < 1e-9 * pos.params.eta.max(1.0));
            prop_assert!((pos.sndr_star.linear() - neg.sndr_star.linear()).abs() < 1e-9 * pos.sndr_star.linear().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capacity_bounds_are_ordered(dsnr_db in -10.0f64..50.0) {
        let t = 10f64.powf(-dsnr_db / 10.0);
        let g = InputDistribution::gaussian();
        let opt = lower_bound(&g, t, None).unwrap();
        let g2 = lower_bound(&g, t, Some(&NonlinearMapping::fixed_reference())).unwrap();
        let upper = upper_bound(1.0 / t).unwrap();
        prop_assert!(opt >= g2 && g2 >= 0.0 && opt <= upper, "{g2} ≤ {opt} ≤ {upper}");
        prop_assert_eq!(LogBase::Bits.from_nats(opt), opt / std::f64::consts::LN_2);
    }
}

#[test]
fn optimum_beats_ten_thousand_random_mappings() {
    for d in [InputDistribution::uniform(), InputDistribution::gaussian(), skewed()] {
        for dsnr_db in [0.0, 10.0, 20.0] {
            let t = 10f64.powf(-dsnr_db / 10.0);
            let star = solve_general(&d, t, Branch::Positive).unwrap().sndr_star.linear();
            let search = random_mapping_search(&d, t, 10_000, 77).unwrap();
            assert!(search.best_sndr <= star + 1e-9, "{} > {star} at {dsnr_db} dB", search.best_sndr);
        }
    }
}

#[test]
fn capacity_sandwich_on_whole_grid() {
    let g = InputDistribution::gaussian();
    for db in -10..=50 {
        let t = 10f64.powf(-db as f64 / 10.0);
        let out = solve_symmetric(&g, t, Branch::Positive).unwrap();
        assert!(rate_from_sndr(out.sndr_star) <= upper_bound(1.0 / t).unwrap());
    }
}

#[test]
fn limiter_params_reject_zero_gain() {
    assert!(LimiterParams::new(0.0, 0.5).is_err());
}
