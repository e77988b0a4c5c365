//! Frequency-domain cross-check of the series engine.
//!
//! Instead of expanding each cavity into its round-trip series, the oracle
//! integrates the closed geometric transfer function against the Gaussian
//! spectral weight on a uniform grid. Writing `mu_j(nu)` for the transfer
//! factor of arm `j` at detuning `nu`, the rate is
//!
//! ```text
//! N(delta) = int w(nu) { 1/2 |mu_s(nu)|^2 (|mu_i(-nu)|^2 + |mu_i(nu)|^2)
//!                        - Re[ e^{2 i nu delta} mu_s(nu) conj(mu_s(-nu)) conj(mu_i(nu)) mu_i(-nu) ] } dnu
//! ```
//!
//! with `w` the unit-normalised Gaussian of width `dw`. Expanding the
//! geometric sums term by term gives back the series exactly: the exchange
//! term produces the `G(tau_i s2 - tau_s s1 - delta)` envelopes, and the
//! symmetrised direct term produces the `cos(P_s d1) cos(P_i d2)` weights of
//! the delay-independent background.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Cavity, InterferometerConfig};

/// Change allowed when the quadrature grid is refined.
pub const CONVERGENCE_TOL: f64 = 1e-10;

/// Describes how the oracle maps the cavity series onto a spectral integral.
pub const PHASE_CONVENTION: &str = "mu(nu) = T / (1 - R exp(i (omega_p tau_c + 2 nu tau_c))); \
     one transit tau_c per reflection index, direct term symmetrised over the idler detuning sign";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Grid nodes over the support, endpoints included.
    pub n_points: usize,
    /// Half-width of the support in units of the spectral width.
    pub support_halfwidth: f64,
}

impl QuadratureSpec {
    pub fn new(n_points: usize, support_halfwidth: f64) -> Result<Self> {
        if n_points < 64 {
            return Err(Error::invalid("n_points", format!("{n_points} < 64")));
        }
        if !(support_halfwidth >= 6.0 && support_halfwidth.is_finite()) {
            return Err(Error::invalid(
                "support_halfwidth",
                format!("{support_halfwidth} must be >= 6"),
            ));
        }
        Ok(Self {
            n_points,
            support_halfwidth,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // The cavity poles sit |ln R| / (2 tau_c) off the real axis, which for
        // R = 0.9 and dw tau_c = 30 is ~2e-3 dw; the grid has to resolve that.
        Self {
            n_points: 1 << 16,
            support_halfwidth: 8.0,
        }
    }
}

/// Trapezoid rule for `int w(nu) f(nu) dnu` with `w` the normalised Gaussian,
/// evaluated on `spec` and on the grid with every interval halved.
/// Returns `(coarse, fine)`.
fn gaussian_trapezoid<F>(delta_omega: f64, spec: &QuadratureSpec, f: F) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let half = spec.support_halfwidth * delta_omega;
    let intervals = spec.n_points - 1;
    let h = 2.0 * half / intervals as f64;
    let norm = 1.0 / (PI.sqrt() * delta_omega);
    let weighted = |nu: f64| {
        let x = nu / delta_omega;
        norm * (-x * x).exp() * f(nu)
    };

    let mut nodes = 0.5 * (weighted(-half) + weighted(half));
    for k in 1..intervals {
        nodes += weighted(-half + h * k as f64);
    }
    let mut mids = 0.0;
    for k in 0..intervals {
        mids += weighted(-half + h * (k as f64 + 0.5));
    }
    let coarse = h * nodes;
    let fine = 0.5 * h * (nodes + mids);
    (coarse, fine)
}

fn converged(coarse: f64, fine: f64) -> Result<f64> {
    let change = (fine - coarse).abs();
    if change > CONVERGENCE_TOL || !fine.is_finite() {
        Err(Error::NonConvergence { change })
    } else {
        Ok(coarse)
    }
}

/// Checks `int w [cos(2 nu A) - cos(2 nu B)] = exp(-dw^2 A^2) - exp(-dw^2 B^2)`.
///
/// Returns `(quadrature, closed_form)`.
pub fn gaussian_term_identity(
    a: f64,
    b: f64,
    delta_omega: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let (coarse, fine) = gaussian_trapezoid(delta_omega, spec, |nu| {
        (2.0 * nu * a).cos() - (2.0 * nu * b).cos()
    });
    let numeric = converged(coarse, fine)?;
    let gauss = |x: f64| {
        let y = delta_omega * x;
        (-y * y).exp()
    };
    Ok((numeric, gauss(a) - gauss(b)))
}

/// Closed form of the cavity transmission series,
/// `T / (1 - R exp(i (pump_phase + nu tau_c)))`.
pub fn mu_tilde(cavity: &Cavity, nu: f64, pump_phase: f64) -> Result<Complex64> {
    let r = cavity.reflectance();
    if r >= 1.0 {
        return Err(Error::ReflectanceTooHigh(r));
    }
    Ok(transfer(cavity, nu, pump_phase))
}

#[inline]
fn transfer(cavity: &Cavity, nu: f64, pump_phase: f64) -> Complex64 {
    let phase = pump_phase + nu * cavity.transit_time();
    let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(cavity.reflectance(), phase);
    cavity.transmittance() / denom
}

/// Coincidence rate by frequency quadrature of the closed transfer functions.
pub fn rate_spectral(
    config: &InterferometerConfig,
    delta: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let idler = config.idler();
    let signal = config.signal();
    for cavity in [&idler, &signal] {
        if cavity.reflectance() >= 1.0 {
            return Err(Error::ReflectanceTooHigh(cavity.reflectance()));
        }
    }
    let lambda_pump = config.profile.lambda_pump();
    let (p_i, p_s) = (
        idler.pump_phase(lambda_pump),
        signal.pump_phase(lambda_pump),
    );

    let integrand = |nu: f64| {
        let s_pos = transfer(&signal, 2.0 * nu, p_s);
        let s_neg = transfer(&signal, -2.0 * nu, p_s);
        let i_pos = transfer(&idler, 2.0 * nu, p_i);
        let i_neg = transfer(&idler, -2.0 * nu, p_i);
        let direct = 0.5 * s_pos.norm_sqr() * (i_neg.norm_sqr() + i_pos.norm_sqr());
        let exchange = Complex64::from_polar(1.0, 2.0 * nu * delta)
            * s_pos
            * s_neg.conj()
            * i_pos.conj()
            * i_neg;
        direct - exchange.re
    };
    let (coarse, fine) = gaussian_trapezoid(config.profile.delta_omega(), spec, integrand);
    converged(coarse, fine)
}

/// Provenance of oracle results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMetadata {
    pub phase_convention: &'static str,
    pub quadrature: QuadratureSpec,
    /// Oracle value of the bare-interferometer plateau; the series engine
    /// normalises this to exactly 1, so any departure is a global scale error.
    pub plateau_scale: f64,
}

pub fn oracle_metadata(
    config: &InterferometerConfig,
    spec: &QuadratureSpec,
) -> Result<OracleMetadata> {
    let bare = InterferometerConfig::bare(config.profile);
    // Well outside the dip: 20 / dw puts the Gaussian at exp(-400).
    let far = 20.0 / config.profile.delta_omega();
    Ok(OracleMetadata {
        phase_convention: PHASE_CONVENTION,
        quadrature: *spec,
        plateau_scale: rate_spectral(&bare, far, spec)?,
    })
}
