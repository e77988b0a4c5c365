#![allow(dead_code)]

use hom_cavity::{truncation_order, Cavity, InterferometerConfig, SpectralProfile};

pub const NM: f64 = 1e-9;
pub const MM: f64 = 1e-3;
pub const PS: f64 = 1e-12;

pub const L_RES: f64 = 0.404838 * MM;
pub const L_ANTI: f64 = 0.4050447 * MM;
pub const L_NEITHER: f64 = 0.4 * MM;
pub const MID_PLATFORM: f64 = 0.66733 * PS;

pub fn profile() -> SpectralProfile {
    SpectralProfile::degenerate(826.2 * NM, 8.0 * NM).unwrap()
}

pub fn cavity(length: f64, r: f64) -> Cavity {
    Cavity::lossless(length, r).unwrap()
}

pub fn one(length: f64, r: f64) -> InterferometerConfig {
    InterferometerConfig::one_cavity(cavity(length, r), profile())
}

pub fn two(idler: f64, signal: f64, r: f64) -> InterferometerConfig {
    InterferometerConfig::two_cavities(cavity(idler, r), cavity(signal, r), profile())
}

/// Direct quadruple sum over reflection counts with no envelope pruning.
/// Shells are cut at the same order as the series engine.
pub fn brute_force_rate(config: &InterferometerConfig, delta: f64, eps_weight: f64) -> f64 {
    let (idl, sig) = (config.idler(), config.signal());
    let lp = config.profile.lambda_pump();
    let dw = config.profile.delta_omega();
    let ms = truncation_order(sig.reflectance(), eps_weight).max(1);
    let mi = truncation_order(idl.reflectance(), eps_weight).max(1);
    let (ts, ti) = (sig.transit_time(), idl.transit_time());
    let (ps, pi) = (sig.pump_phase(lp), idl.pump_phase(lp));
    let (rs, ri) = (sig.reflectance(), idl.reflectance());
    let g = |x: f64| (-(dw * x) * (dw * x)).exp();
    let mut total = 0.0;
    for m in 0..ms {
        for l in 0..ms - m {
            let d1 = m as f64 - l as f64;
            let s1 = (m + l) as f64;
            for n in 0..mi {
                for q in 0..mi - n {
                    let d2 = n as f64 - q as f64;
                    let s2 = (n + q) as f64;
                    let weight = rs.powi((m + l) as i32) * ri.powi((n + q) as i32);
                    let phases = (ps * d1).cos() * (pi * d2).cos();
                    total +=
                        weight * phases * (g(ts * d1 - ti * d2) - g(ti * s2 - ts * s1 - delta));
                }
            }
        }
    }
    (idl.transmittance() * sig.transmittance()).powi(2) * total
}

pub fn rel_dev(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-6)
}
