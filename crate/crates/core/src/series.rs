//! Closed-form Gaussian series for the coincidence rate.
//!
//! With a cavity in each arm the rate is a quadruple sum over the number of
//! internal round trips `m, l` (signal) and `n, q` (idler). Re-indexing by
//! shell `s = m + l` and difference `d = m - l` factorises it:
//!
//! ```text
//! N(delta) = (T_i T_s)^2 [ sum_{d1,d2} A_s(d1) A_i(d2) cos(P_s d1) cos(P_i d2) G(tau_s d1 - tau_i d2)
//!                        - sum_{s1,s2} R_s^s1 C_s(s1) R_i^s2 C_i(s2) G(tau_i s2 - tau_s s1 - delta) ]
//! ```
//!
//! where `G(x) = exp(-dw^2 x^2)`, `P = omega_p tau_c`, `A(d)` sums `R^s` over
//! the shells that contain difference `d`, and `C(s)` sums `cos(P d)` over the
//! differences inside shell `s`. The first bracket does not depend on the
//! delay and is computed once per configuration. Both Gaussians are narrow
//! on the scale of `tau_c`, so only a band of one or two indices survives the
//! envelope cutoff for each outer index.

use crate::error::{Error, Result};
use crate::model::{Cavity, InterferometerConfig, SpectralProfile};

/// Cutoffs that make the formally infinite sums finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerances {
    /// Shells with `R^s` below this are dropped.
    pub eps_weight: f64,
    /// Gaussian factors below this contribute zero.
    pub eps_envelope: f64,
}

impl SeriesTolerances {
    pub const MAX_EPS: f64 = 1e-6;

    pub fn new(eps_weight: f64, eps_envelope: f64) -> Result<Self> {
        for (name, value) in [("eps_weight", eps_weight), ("eps_envelope", eps_envelope)] {
            if !(value > 0.0 && value <= Self::MAX_EPS) {
                return Err(Error::invalid(name, format!("{value} outside (0, 1e-6]")));
            }
        }
        Ok(Self {
            eps_weight,
            eps_envelope,
        })
    }

    /// Largest `|x|` for which `exp(-dw^2 x^2) >= eps_envelope`.
    fn envelope_cut(&self, delta_omega: f64) -> f64 {
        (-self.eps_envelope.ln()).sqrt() / delta_omega
    }
}

impl Default for SeriesTolerances {
    fn default() -> Self {
        Self {
            eps_weight: 1e-10,
            eps_envelope: 1e-14,
        }
    }
}

/// Smallest `M` with `R^M < eps_weight`; zero for a bare mirror.
pub fn truncation_order(reflectance: f64, eps_weight: f64) -> usize {
    if reflectance <= 0.0 {
        return 0;
    }
    let mut order = (eps_weight.ln() / reflectance.ln()).ceil().max(0.0) as usize;
    // Guard the exact-ratio case against ln rounding in either direction.
    while order > 0 && reflectance.powi(order as i32 - 1) < eps_weight {
        order -= 1;
    }
    while reflectance.powi(order as i32) >= eps_weight {
        order += 1;
    }
    order
}

/// Plain HOM dip, `1 - exp(-dw^2 delta^2)`.
pub fn rate_bare(profile: &SpectralProfile, delta: f64) -> f64 {
    let x = profile.delta_omega() * delta;
    -(-x * x).exp_m1()
}

/// Coincidence rate with a single cavity in the idler arm.
pub fn rate_one_cavity(
    cavity: &Cavity,
    profile: &SpectralProfile,
    delta: f64,
    tol: &SeriesTolerances,
) -> Result<f64> {
    Ok(OneCavitySeries::new(cavity, profile, tol)?.rate(delta))
}

/// Coincidence rate for the general two-arm configuration. A missing cavity
/// is replaced by a transparent one (`R = 0`, `T = 1`, zero length).
pub fn rate_two_cavity(
    config: &InterferometerConfig,
    delta: f64,
    tol: &SeriesTolerances,
) -> Result<f64> {
    Ok(TwoCavitySeries::new(config, tol)?.rate(delta))
}

/// Per-cavity tables shared by the one- and two-cavity evaluators.
#[derive(Debug, Clone)]
struct ShellTables {
    transit: f64,
    /// Number of retained shells; shells run over `0..shells`.
    shells: usize,
    /// `R^s C(s)` per shell.
    shell_weight: Vec<f64>,
    /// `A(|d|) cos(P d)` for `d = 0..shells`.
    diff_weight: Vec<f64>,
}

impl ShellTables {
    fn new(cavity: &Cavity, lambda_pump: f64, tol: &SeriesTolerances) -> Result<Self> {
        let r = cavity.reflectance();
        if r >= 1.0 {
            return Err(Error::ReflectanceTooHigh(r));
        }
        let shells = truncation_order(r, tol.eps_weight).max(1);
        let pump_phase = cavity.pump_phase(lambda_pump);
        let cos_table: Vec<f64> = (0..shells).map(|k| (pump_phase * k as f64).cos()).collect();
        let powers: Vec<f64> = (0..shells).map(|s| r.powi(s as i32)).collect();

        let shell_weight = (0..shells)
            .map(|s| {
                let phase_sum: f64 = (0..=s)
                    .map(|k| cos_table[(s as isize - 2 * k as isize).unsigned_abs()])
                    .sum();
                powers[s] * phase_sum
            })
            .collect();

        // A(d) = sum over s >= d, s = d (mod 2), of R^s; accumulate from the top.
        let mut tail = vec![0.0; shells + 2];
        for d in (0..shells).rev() {
            tail[d] = powers[d] + tail[d + 2];
        }
        let diff_weight = (0..shells).map(|d| tail[d] * cos_table[d]).collect();

        Ok(Self {
            transit: cavity.transit_time(),
            shells,
            shell_weight,
            diff_weight,
        })
    }

    fn diff(&self, d: i64) -> f64 {
        self.diff_weight[d.unsigned_abs() as usize]
    }
}

/// Indices `k` in `lo..=hi` with `|tau k - x| <= cut`.
fn band(x: f64, cut: f64, tau: f64, lo: i64, hi: i64) -> std::ops::RangeInclusive<i64> {
    if tau == 0.0 {
        return if x.abs() <= cut { lo..=hi } else { hi + 1..=hi };
    }
    let first = ((x - cut) / tau).ceil().max(lo as f64);
    let last = ((x + cut) / tau).floor().min(hi as f64);
    if first > last {
        hi + 1..=hi
    } else {
        first as i64..=last as i64
    }
}

#[inline]
fn envelope(dw: f64, x: f64) -> f64 {
    let y = dw * x;
    (-y * y).exp()
}

/// Precomputed single-cavity series (cavity in the idler arm).
#[derive(Debug, Clone)]
pub struct OneCavitySeries {
    table: ShellTables,
    prefactor: f64,
    delta_omega: f64,
    cut: f64,
    constant: f64,
}

impl OneCavitySeries {
    pub fn new(cavity: &Cavity, profile: &SpectralProfile, tol: &SeriesTolerances) -> Result<Self> {
        let table = ShellTables::new(cavity, profile.lambda_pump(), tol)?;
        let delta_omega = profile.delta_omega();
        let cut = tol.envelope_cut(delta_omega);
        let top = table.shells as i64 - 1;
        let constant = band(0.0, cut, table.transit, -top, top)
            .map(|d| table.diff(d) * envelope(delta_omega, table.transit * d as f64))
            .sum();
        Ok(Self {
            prefactor: cavity.transmittance().powi(2),
            table,
            delta_omega,
            cut,
            constant,
        })
    }

    /// Rate before clamping; may dip a few ulps below zero.
    pub fn raw_rate(&self, delta: f64) -> f64 {
        let t = &self.table;
        let shells = band(delta, self.cut, t.transit, 0, t.shells as i64 - 1);
        let interference: f64 = shells
            .map(|s| {
                t.shell_weight[s as usize]
                    * envelope(self.delta_omega, t.transit * s as f64 - delta)
            })
            .sum();
        self.prefactor * (self.constant - interference)
    }

    pub fn rate(&self, delta: f64) -> f64 {
        self.raw_rate(delta).max(0.0)
    }

    /// Delay-independent part of the rate.
    pub fn background(&self) -> f64 {
        self.prefactor * self.constant
    }
}

/// Precomputed two-cavity series.
#[derive(Debug, Clone)]
pub struct TwoCavitySeries {
    signal: ShellTables,
    idler: ShellTables,
    prefactor: f64,
    delta_omega: f64,
    cut: f64,
    constant: f64,
}

impl TwoCavitySeries {
    pub fn new(config: &InterferometerConfig, tol: &SeriesTolerances) -> Result<Self> {
        let lambda_pump = config.profile.lambda_pump();
        let signal = ShellTables::new(&config.signal(), lambda_pump, tol)?;
        let idler = ShellTables::new(&config.idler(), lambda_pump, tol)?;
        let delta_omega = config.profile.delta_omega();
        let cut = tol.envelope_cut(delta_omega);

        let s_top = signal.shells as i64 - 1;
        let i_top = idler.shells as i64 - 1;
        let mut constant = 0.0;
        for d1 in -s_top..=s_top {
            let x = signal.transit * d1 as f64;
            let outer = signal.diff(d1);
            let inner: f64 = band(x, cut, idler.transit, -i_top, i_top)
                .map(|d2| idler.diff(d2) * envelope(delta_omega, x - idler.transit * d2 as f64))
                .sum();
            constant += outer * inner;
        }

        let prefactor = (config.idler().transmittance() * config.signal().transmittance()).powi(2);
        Ok(Self {
            signal,
            idler,
            prefactor,
            delta_omega,
            cut,
            constant,
        })
    }

    pub fn raw_rate(&self, delta: f64) -> f64 {
        let (sig, idl) = (&self.signal, &self.idler);
        let i_top = idl.shells as i64 - 1;
        let mut interference = 0.0;
        for s1 in 0..sig.shells {
            let x = sig.transit * s1 as f64 + delta;
            let inner: f64 = band(x, self.cut, idl.transit, 0, i_top)
                .map(|s2| {
                    idl.shell_weight[s2 as usize]
                        * envelope(self.delta_omega, idl.transit * s2 as f64 - x)
                })
                .sum();
            interference += sig.shell_weight[s1] * inner;
        }
        self.prefactor * (self.constant - interference)
    }

    pub fn rate(&self, delta: f64) -> f64 {
        self.raw_rate(delta).max(0.0)
    }

    pub fn background(&self) -> f64 {
        self.prefactor * self.constant
    }
}

/// Picks the cheapest exact evaluator for a configuration.
#[derive(Debug, Clone)]
pub enum SeriesEvaluator {
    Bare(SpectralProfile),
    OneCavity(OneCavitySeries),
    TwoCavity(TwoCavitySeries),
}

impl SeriesEvaluator {
    pub fn new(config: &InterferometerConfig, tol: &SeriesTolerances) -> Result<Self> {
        Ok(match (config.idler_cavity, config.signal_cavity) {
            (None, None) => SeriesEvaluator::Bare(config.profile),
            (Some(cavity), None) => {
                SeriesEvaluator::OneCavity(OneCavitySeries::new(&cavity, &config.profile, tol)?)
            }
            _ => SeriesEvaluator::TwoCavity(TwoCavitySeries::new(config, tol)?),
        })
    }

    pub fn raw_rate(&self, delta: f64) -> f64 {
        match self {
            SeriesEvaluator::Bare(profile) => rate_bare(profile, delta),
            SeriesEvaluator::OneCavity(series) => series.raw_rate(delta),
            SeriesEvaluator::TwoCavity(series) => series.raw_rate(delta),
        }
    }

    pub fn rate(&self, delta: f64) -> f64 {
        self.raw_rate(delta).max(0.0)
    }
}
