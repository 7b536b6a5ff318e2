use aqo_reduce::annealing::{
    analytic_scaling, coarse_grid, computational_time, gap_at, gap_profile, q_distribution, t_ann_optimal, Schedule,
};
use aqo_reduce::models::{Driver, ModelSpec};
use proptest::prelude::*;

#[test]
fn classical_threshold_of_the_closed_form() {
    let (mut lo, mut hi) = (1.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if analytic_scaling(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - 4.544).abs() < 0.01, "{lo}");
}

#[test]
fn central_binomial_probability() {
    let p = q_distribution(100);
    assert!(p[50] < 0.08);
    assert!(p.iter().all(|&x| x >= 0.0));
}

#[test]
fn standard_driver_profile_has_its_dip_near_the_middle() {
    let n = 30;
    let m = ModelSpec::GroverPlain { driver: Driver::Standard, n, target_scale: f64::from(n) };
    let p = gap_profile(&m, 257).unwrap();
    assert!((p.s_star - 0.5).abs() < 0.02);
    assert!(p.g_min < 1e-3 && p.g_min > 0.0);
    assert!(p.s_points.windows(2).all(|w| w[0] < w[1]));
    assert!(p.gaps.iter().all(|&g| g >= 0.0));
}

#[test]
fn strong_noise_gap_at_unit_target_energy_is_flat() {
    let at = |n: u32| {
        let m = ModelSpec::GroverNoiseStd { n, epsilon: 10.0, q: 0, target_scale: 1.0 };
        gap_profile(&m, 257).unwrap().g_min
    };
    let (small, large) = (at(40), at(160));
    assert!((small / large - 1.0).abs() < 1e-6, "{small} vs {large}");
}

#[test]
fn strong_noise_gap_with_extensive_target_energy_narrows() {
    // the target level crosses the noise ground state near s = 1/(1 + sqrt(21))
    let m = ModelSpec::GroverNoiseStd { n: 160, epsilon: 10.0, q: 0, target_scale: 160.0 };
    let p = gap_profile(&m, 257).unwrap();
    assert!((p.s_star - 0.168).abs() < 0.01, "{}", p.s_star);
    assert!((p.g_min - 0.673).abs() < 1e-3, "{}", p.g_min);
}

#[test]
fn heavy_targets_beyond_cutoff_are_not_used() {
    let m = ModelSpec::GroverNoiseStd { n: 16, epsilon: 2.0, q: 0, target_scale: 16.0 };
    let r = computational_time(&m, Schedule::Linear, 0.99, 65).unwrap();
    assert_eq!(r.q_epsilon, 4);
    assert!(r.q_star <= 4);
}

#[test]
fn optimal_time_exceeds_the_central_window() {
    let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 2, target_scale: 1.0 };
    let t = t_ann_optimal(&m).unwrap();
    // g ≤ 1 everywhere, so the integral is at least 1; the 2-level closed form gives 2π/(3√3)·... ≈ 1.2092
    let e = 0.75f64;
    let exact = (e.sqrt() / (1.0 - e).sqrt()).atan() / (e * (1.0 - e)).sqrt();
    assert!((t - exact).abs() < 1e-6 * exact);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn refined_minimum_never_exceeds_the_coarse_scan(
        n in 4u32..40,
        eps in 0.0f64..3.0,
        qfrac in 0.0f64..1.0,
        points in 16usize..80,
    ) {
        let q = (qfrac * f64::from(n)) as u32;
        let m = ModelSpec::GroverNoiseStd { n, epsilon: eps, q, target_scale: f64::from(n) };
        let p = gap_profile(&m, points).unwrap();
        let coarse = coarse_grid(points).iter().map(|&s| gap_at(&m, s).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!(p.g_min <= coarse);
        prop_assert!((0.0..=1.0).contains(&p.s_star));
    }
}
