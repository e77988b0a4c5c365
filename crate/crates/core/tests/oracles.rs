//! Series engine against independent routes: the unpruned quadruple sum and
//! the frequency-domain quadrature of the closed transfer functions.

mod common;

use common::*;
use hom_cavity::curve::{linspace, scan_idler_length};
use hom_cavity::quadrature::oracle_metadata;
use hom_cavity::{
    rate_bare, rate_one_cavity, rate_spectral, rate_two_cavity, sweep, Cavity,
    InterferometerConfig, QuadratureSpec, SeriesTolerances,
};
use proptest::prelude::*;

fn small_tol() -> SeriesTolerances {
    SeriesTolerances::new(1e-7, 1e-14).unwrap()
}

#[test]
fn pruned_matches_brute_force() {
    let tol = small_tol();
    let configs = [
        two(L_RES, L_ANTI, 0.5),
        two(L_NEITHER, L_NEITHER, 0.4),
        InterferometerConfig::two_cavities(cavity(L_RES, 0.3), cavity(0.35 * MM, 0.5), profile()),
        one(L_NEITHER, 0.5),
    ];
    for config in &configs {
        for delta in linspace(-4.0 * PS, 6.0 * PS, 201) {
            let pruned = rate_two_cavity(config, delta, &tol).unwrap();
            let brute = brute_force_rate(config, delta, tol.eps_weight);
            assert!(
                (pruned - brute.max(0.0)).abs() < 1e-12,
                "delta {delta:e}: pruned {pruned} brute {brute}"
            );
        }
    }
}

#[test]
fn reduction_chain() {
    let tol = SeriesTolerances::default();
    let p = profile();
    for r in [0.3, 0.7, 0.9] {
        let cav = cavity(L_NEITHER, r);
        let nulled = InterferometerConfig {
            idler_cavity: Some(cav),
            signal_cavity: Some(Cavity::absent()),
            profile: p,
        };
        for delta in linspace(-2.0 * PS, 8.0 * PS, 401) {
            let a = rate_two_cavity(&nulled, delta, &tol).unwrap();
            let b = rate_one_cavity(&cav, &p, delta, &tol).unwrap();
            assert!((a - b).abs() < 1e-12, "R={r} delta={delta:e}: {a} vs {b}");
        }
    }
    for delta in linspace(-300e-15, 300e-15, 301) {
        let a = rate_one_cavity(&Cavity::absent(), &p, delta, &tol).unwrap();
        assert!((a - rate_bare(&p, delta)).abs() < 1e-12);
    }
}

#[test]
fn identical_cavities_are_mirror_symmetric() {
    let tol = SeriesTolerances::default();
    for l in [L_RES, L_ANTI, L_NEITHER] {
        let config = two(l, l, 0.7);
        for delta in linspace(0.0, 8.0 * PS, 161) {
            let a = rate_two_cavity(&config, delta, &tol).unwrap();
            let b = rate_two_cavity(&config, -delta, &tol).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-12), "{a} vs {b}");
        }
    }
}

#[test]
fn exact_coalescence_needs_exact_resonance() {
    // The exchange pairing maps cos(P d)^2 onto cos(P(d+e)) cos(P(d-e)), so the
    // zero at delta = 0 is exact only when 2P is a multiple of 2 pi.
    let tol = SeriesTolerances::default();
    let lp = profile().lambda_pump();
    for l in [980.0 * lp, 980.5 * lp] {
        let zero = rate_two_cavity(&two(l, l, 0.7), 0.0, &tol).unwrap();
        assert!(zero < 1e-12, "{l}: {zero}");
    }
    let detuned = rate_two_cavity(&two(L_ANTI, L_ANTI, 0.7), 0.0, &tol).unwrap();
    assert!(detuned > 1e-7 && detuned < 1e-5, "{detuned}");
}

#[test]
fn tolerance_robustness() {
    let coarse = SeriesTolerances::default();
    let fine = SeriesTolerances::new(coarse.eps_weight / 2.0, coarse.eps_envelope / 2.0).unwrap();
    for config in [
        one(L_RES, 0.9),
        two(L_RES, L_ANTI, 0.7),
        two(L_NEITHER, L_NEITHER, 0.9),
    ] {
        for delta in linspace(-3.0 * PS, 8.0 * PS, 111) {
            let a = rate_two_cavity(&config, delta, &coarse).unwrap();
            let b = rate_two_cavity(&config, delta, &fine).unwrap();
            let bound = 10.0 * coarse.eps_weight * b.abs().max(1e-12);
            assert!((a - b).abs() <= bound, "delta {delta:e}: {a} vs {b}");
        }
    }
}

#[test]
fn one_cavity_platform_independent_of_length() {
    let tol = SeriesTolerances::default();
    let config = one(L_RES, 0.7);
    let lambda = 826.2 * NM;
    let scan = scan_idler_length(
        &config,
        L_RES - 2.0 * lambda,
        L_RES + 2.0 * lambda,
        201,
        MID_PLATFORM,
        &tol,
    )
    .unwrap();
    let reference = 0.09 / 0.51;
    for rate in scan.rates {
        assert!((rate - reference).abs() / reference < 1e-6);
    }
}

#[test]
fn oracle_equivalence_on_canonical_configs() {
    let spec = QuadratureSpec::default();
    let tol = SeriesTolerances::default();
    let configs = [
        InterferometerConfig::bare(profile()),
        one(L_RES, 0.7),
        two(L_ANTI, L_RES, 0.7),
    ];
    for config in &configs {
        let meta = oracle_metadata(config, &spec).unwrap();
        assert!((meta.plateau_scale - 1.0).abs() < 1e-12);
        for delta in linspace(-2.0 * PS, 8.0 * PS, 50) {
            let series = rate_two_cavity(config, delta, &tol).unwrap();
            let oracle = rate_spectral(config, delta, &spec).unwrap();
            assert!(
                rel_dev(oracle, series) <= 1e-6,
                "delta {delta:e}: oracle {oracle} series {series}"
            );
        }
    }
}

#[test]
fn oracle_on_valley_and_coalescence() {
    let spec = QuadratureSpec::default();
    let c = cavity(L_RES, 0.7);
    let valley = rate_spectral(&one(L_RES, 0.7), c.transit_time(), &spec).unwrap();
    assert!(rel_dev(valley, 0.050_470_588) <= 1e-6, "{valley}");
    let coalescence = rate_spectral(&two(L_RES, L_RES, 0.7), 0.0, &spec).unwrap();
    assert!(coalescence.abs() < 1e-10, "{coalescence}");
}

#[test]
fn oracle_at_high_reflectance() {
    let spec = QuadratureSpec::default();
    let tol = SeriesTolerances::default();
    let config = two(L_NEITHER, L_RES, 0.9);
    for delta in linspace(-2.0 * PS, 4.0 * PS, 13) {
        let series = rate_two_cavity(&config, delta, &tol).unwrap();
        let oracle = rate_spectral(&config, delta, &spec).unwrap();
        assert!(
            rel_dev(oracle, series) <= 1e-6,
            "delta {delta:e}: {oracle} vs {series}"
        );
    }
}

#[test]
fn acceptance_sweeps_are_non_negative() {
    let tol = SeriesTolerances::default();
    for config in [
        one(L_RES, 0.9),
        one(L_ANTI, 0.7),
        two(L_RES, L_RES, 0.7),
        two(L_ANTI, L_ANTI, 0.7),
        two(L_NEITHER, L_NEITHER, 0.9),
    ] {
        let curve = sweep(&config, -8.0 * PS, 8.0 * PS, 1601, &tol).unwrap();
        assert!(curve.rates().iter().all(|&r| r >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rates_never_negative(
        li in 0.39f64..0.41, ls in 0.39f64..0.41, ri in 0.0f64..0.95, rs in 0.0f64..0.95,
        delta in -8.0f64..8.0,
    ) {
        let config = InterferometerConfig::two_cavities(
            cavity(li * MM, ri), cavity(ls * MM, rs), profile());
        let raw = hom_cavity::SeriesEvaluator::new(&config, &SeriesTolerances::default())
            .unwrap()
            .raw_rate(delta * PS);
        prop_assert!(raw >= -1e-12, "raw {}", raw);
    }

    #[test]
    fn swapping_arms_mirrors_delay(
        li in 0.39f64..0.41, ls in 0.39f64..0.41, r in 0.1f64..0.8, delta in -6.0f64..6.0,
    ) {
        let tol = SeriesTolerances::default();
        let a = rate_two_cavity(&two(li * MM, ls * MM, r), delta * PS, &tol).unwrap();
        let b = rate_two_cavity(&two(ls * MM, li * MM, r), -delta * PS, &tol).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
