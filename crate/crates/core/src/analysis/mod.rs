//! Closed-form predictions and curve-level analysis.

mod logic;
mod regions;

pub use logic::{symmetry_score, xor_gate, Pattern, XorBase, XorResult, SYM_THRESHOLD};
pub use regions::{
    detect_regions, region_width, RegionAnalysis, RegionKind, RegionReport, DEFAULT_FLAT_TOL,
};

use crate::error::{Error, Result};
use crate::model::{Cavity, InterferometerConfig};
use crate::series::{SeriesEvaluator, SeriesTolerances};

/// Rate far from every interference region with one cavity: the fraction of
/// pairs that cross, `T^2 / (1 - R^2)`.
pub fn platform_one_cavity(cavity: &Cavity) -> Result<f64> {
    let r = cavity.reflectance();
    if r >= 1.0 {
        return Err(Error::ReflectanceTooHigh(r));
    }
    Ok(cavity.transmittance().powi(2) / (1.0 - r * r))
}

/// Rate at the center of interference region `j` (one cavity), summing the
/// `j` reflection histories with `n + q = j - 1`.
pub fn region_amplitude(j: usize, cavity: &Cavity, lambda_pump: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("j", "region order starts at 1"));
    }
    let platform = platform_one_cavity(cavity)?;
    let shell = j - 1;
    let phase = cavity.pump_phase(lambda_pump);
    let phase_sum: f64 = (0..=shell)
        .map(|n| (phase * (2.0 * n as f64 - shell as f64)).cos())
        .sum();
    let t2 = cavity.transmittance().powi(2);
    Ok(platform - t2 * cavity.reflectance().powi(shell as i32) * phase_sum)
}

/// Region amplitude for an exactly resonant cavity, all histories in phase.
pub fn region_amplitude_resonant(j: usize, cavity: &Cavity) -> Result<f64> {
    signed_closed_form(j, cavity, 1.0)
}

/// Region amplitude for an exactly anti-resonant cavity; alternates in sign.
pub fn region_amplitude_antiresonant(j: usize, cavity: &Cavity) -> Result<f64> {
    signed_closed_form(j, cavity, -1.0)
}

fn signed_closed_form(j: usize, cavity: &Cavity, sign: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("j", "region order starts at 1"));
    }
    let platform = platform_one_cavity(cavity)?;
    let weight = (sign * cavity.reflectance()).powi(j as i32 - 1) * j as f64;
    Ok(platform - cavity.transmittance().powi(2) * weight)
}

/// Order of the deepest resonant valley, `argmax_j j R^(j-1)` over `1..=j_max`.
/// Ties go to the smaller order.
pub fn deepest_region_order(reflectance: f64, j_max: usize) -> usize {
    let mut best = 1;
    let mut best_value = 1.0;
    for j in 2..=j_max.max(1) {
        let value = j as f64 * reflectance.powi(j as i32 - 1);
        if value > best_value * (1.0 + 1e-12) {
            best = j;
            best_value = value;
        }
    }
    best
}

/// Overlap integral of two unit-height Gaussians of deviation `sigma` whose
/// centers are `spacing` apart.
pub fn gaussian_overlap(sigma: f64, spacing: f64) -> f64 {
    let x = spacing / (2.0 * sigma);
    std::f64::consts::PI.sqrt() * sigma * (-x * x).exp()
}

/// Series rate at a chosen platform delay. With two cavities this value
/// depends on both lengths and can serve as an alternative gate readout once
/// calibrated; no bit decision is taken here.
pub fn platform_readout(
    config: &InterferometerConfig,
    delay: f64,
    tol: &SeriesTolerances,
) -> Result<f64> {
    Ok(SeriesEvaluator::new(config, tol)?.rate(delay))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LP: f64 = 413.1e-9;

    fn cav(length_mm: f64, r: f64) -> Cavity {
        Cavity::lossless(length_mm * 1e-3, r).unwrap()
    }

    #[test]
    fn platform_values() {
        assert_eq!(platform_one_cavity(&Cavity::absent()).unwrap(), 1.0);
        assert!((platform_one_cavity(&cav(0.4, 0.7)).unwrap() - 0.176_470_588_235).abs() < 1e-11);
        assert!((platform_one_cavity(&cav(0.4, 0.9)).unwrap() - 0.052_631_578_947).abs() < 1e-11);
        assert!(platform_one_cavity(&Cavity::unchecked(1e-4, 1.0, 0.0)).is_err());
    }

    #[test]
    fn resonant_amplitudes() {
        let c = cav(0.404838, 0.7);
        // platform 0.09/0.51 minus 0.09 j 0.7^(j-1)
        let expected = [0.086_470_588, 0.050_470_588, 0.044_170_588, 0.052_990_588];
        for (j, e) in (1..=4).zip(expected) {
            let general = region_amplitude(j, &c, LP).unwrap();
            let closed = region_amplitude_resonant(j, &c).unwrap();
            assert!((closed - e).abs() < 1e-9, "j={j}: {closed}");
            assert!(
                (general - closed).abs() < 1e-9,
                "j={j}: {general} vs {closed}"
            );
        }
    }

    #[test]
    fn antiresonant_amplitudes() {
        let c = cav(0.4050447, 0.7);
        let general = region_amplitude(2, &c, LP).unwrap();
        let closed = region_amplitude_antiresonant(2, &c).unwrap();
        assert!((closed - 0.302_470_588).abs() < 1e-9);
        assert!((general - closed).abs() < 1e-5);
        assert!(general > platform_one_cavity(&c).unwrap());
    }

    #[test]
    fn first_region_is_length_independent() {
        for l in [0.4, 0.404838, 0.4050447, 0.44444] {
            let c = cav(l, 0.7);
            let a = region_amplitude(1, &c, LP).unwrap();
            assert!((a - (0.09 / 0.51 - 0.09)).abs() < 1e-15);
        }
        assert!(region_amplitude(0, &cav(0.4, 0.7), LP).is_err());
    }

    #[test]
    fn deepest_orders() {
        assert_eq!(deepest_region_order(0.7, 50), 3);
        assert_eq!(deepest_region_order(0.5, 50), 1);
        assert_eq!(deepest_region_order(0.9, 100), 9);
        assert!(deepest_region_order(0.99, 200) >= 50);
        assert_eq!(deepest_region_order(0.99, 1), 1);
    }

    #[test]
    fn overlap_limits() {
        let s = 32e-15;
        assert!((gaussian_overlap(s, 0.0) - std::f64::consts::PI.sqrt() * s).abs() < 1e-28);
        assert_eq!(gaussian_overlap(s, 1.0), 0.0);
        let tau = 0.404838e-3 / crate::model::SPEED_OF_LIGHT;
        let sigma = 826.2e-9f64.powi(2)
            / (2.0
                * std::f64::consts::SQRT_2
                * std::f64::consts::PI
                * crate::model::SPEED_OF_LIGHT
                * 8e-9);
        let exponent = (tau / (2.0 * sigma)).powi(2);
        assert!((exponent - 445.0).abs() < 1.0, "{exponent}");
        assert!(gaussian_overlap(sigma, tau) < 1e-190);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn deepest_order_non_decreasing(r1 in 0.01f64..0.98, r2 in 0.01f64..0.98) {
                let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
                prop_assert!(deepest_region_order(lo, 500) <= deepest_region_order(hi, 500));
            }

            #[test]
            fn closed_forms_match_general_sum(order in 900u32..1100, j in 1usize..12, r in 0.05f64..0.95) {
                let res = Cavity::lossless(order as f64 * LP, r).unwrap();
                let anti = Cavity::lossless((order as f64 + 0.5) * LP, r).unwrap();
                prop_assert!((region_amplitude(j, &res, LP).unwrap()
                    - region_amplitude_resonant(j, &res).unwrap()).abs() < 1e-9);
                prop_assert!((region_amplitude(j, &anti, LP).unwrap()
                    - region_amplitude_antiresonant(j, &anti).unwrap()).abs() < 1e-9);
            }
        }
    }
}
