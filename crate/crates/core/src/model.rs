//! Physical description of the source and the cavities.
//!
//! All quantities are stored in SI units (metres, seconds, rad/s).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default resonance tolerance, as a fraction of the pump wavelength.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-3;

/// Spectral description of the down-converted photon pair.
///
/// `delta_lambda` is the Gaussian width parameter of the detection filter,
/// entering the angular width as `2 pi c delta_lambda / lambda_center^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralProfile {
    lambda_center: f64,
    lambda_pump: f64,
    delta_lambda: f64,
}

impl SpectralProfile {
    pub fn new(lambda_center: f64, lambda_pump: f64, delta_lambda: f64) -> Result<Self> {
        positive("lambda_center", lambda_center)?;
        positive("lambda_pump", lambda_pump)?;
        positive("delta_lambda", delta_lambda)?;
        let profile = Self {
            lambda_center,
            lambda_pump,
            delta_lambda,
        };
        let width = profile.delta_omega();
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::invalid(
                "delta_lambda",
                format!("spectral width {width} rad/s is not finite and positive"),
            ));
        }
        Ok(profile)
    }

    /// Degenerate source: the pump sits at exactly half the photon wavelength.
    pub fn degenerate(lambda_center: f64, delta_lambda: f64) -> Result<Self> {
        Self::new(lambda_center, lambda_center / 2.0, delta_lambda)
    }

    pub fn lambda_center(&self) -> f64 {
        self.lambda_center
    }

    pub fn lambda_pump(&self) -> f64 {
        self.lambda_pump
    }

    pub fn delta_lambda(&self) -> f64 {
        self.delta_lambda
    }

    /// Angular spectral width in rad/s.
    pub fn delta_omega(&self) -> f64 {
        delta_omega(self)
    }

    /// Pump angular frequency in rad/s.
    pub fn omega_pump(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.lambda_pump
    }

    /// Standard deviation of the Gaussian interference features in the
    /// delay domain, `1 / (sqrt(2) delta_omega)`.
    pub fn region_sigma(&self) -> f64 {
        self.lambda_center * self.lambda_center
            / (2.0 * std::f64::consts::SQRT_2 * PI * SPEED_OF_LIGHT * self.delta_lambda)
    }

    pub fn with_delta_lambda(&self, delta_lambda: f64) -> Result<Self> {
        Self::new(self.lambda_center, self.lambda_pump, delta_lambda)
    }
}

/// `2 pi c delta_lambda / lambda^2`.
pub fn delta_omega(profile: &SpectralProfile) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT * profile.delta_lambda
        / (profile.lambda_center * profile.lambda_center)
}

/// A symmetric Fabry-Perot cavity made of two identical mirrors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cavity {
    length: f64,
    reflectance: f64,
    transmittance: f64,
}

impl Cavity {
    /// Lossless cavity, `T = 1 - R`.
    pub fn lossless(length: f64, reflectance: f64) -> Result<Self> {
        Self::with_losses(length, reflectance, 1.0 - reflectance)
    }

    /// Cavity with mirrors that may absorb, `R + T <= 1`.
    pub fn with_losses(length: f64, reflectance: f64, transmittance: f64) -> Result<Self> {
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::invalid(
                "length",
                format!("{length} m must be finite and >= 0"),
            ));
        }
        if !(0.0..1.0).contains(&reflectance) {
            if reflectance >= 1.0 {
                return Err(Error::ReflectanceTooHigh(reflectance));
            }
            return Err(Error::invalid(
                "reflectance",
                format!("{reflectance} outside [0, 1)"),
            ));
        }
        if !(transmittance > 0.0 && transmittance <= 1.0) {
            return Err(Error::invalid(
                "transmittance",
                format!("{transmittance} outside (0, 1]"),
            ));
        }
        // Allow a few ulps so that T = 1 - R round trips.
        if reflectance + transmittance > 1.0 + 4.0 * f64::EPSILON {
            return Err(Error::invalid(
                "transmittance",
                format!("R + T = {} exceeds 1", reflectance + transmittance),
            ));
        }
        Ok(Self {
            length,
            reflectance,
            transmittance,
        })
    }

    /// The stand-in for an empty arm: R = 0, T = 1, zero length.
    pub fn absent() -> Self {
        Self {
            length: 0.0,
            reflectance: 0.0,
            transmittance: 1.0,
        }
    }

    #[cfg(test)]
    pub(crate) fn unchecked(length: f64, reflectance: f64, transmittance: f64) -> Self {
        Self {
            length,
            reflectance,
            transmittance,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn reflectance(&self) -> f64 {
        self.reflectance
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn transit_time(&self) -> f64 {
        cavity_transit_time(self)
    }

    /// Pump phase accumulated over one transit, `omega_p tau_c = 2 pi L / lambda_p`.
    pub fn pump_phase(&self, lambda_pump: f64) -> f64 {
        2.0 * PI * self.length / lambda_pump
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::with_losses(length, self.reflectance, self.transmittance)
    }
}

/// Single-pass transit time `L / c`.
pub fn cavity_transit_time(cavity: &Cavity) -> f64 {
    cavity.length / SPEED_OF_LIGHT
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResonanceKind {
    Resonant,
    AntiResonant,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceClass {
    pub kind: ResonanceKind,
    /// `L / lambda_p` modulo 1, in [0, 1).
    pub fractional_order: f64,
}

/// Classifies a cavity length against the pump wavelength.
///
/// A length that is an integer multiple of `lambda_p` (half the photon
/// wavelength) is resonant; a half-integer multiple is anti-resonant.
pub fn classify_cavity(length: f64, lambda_pump: f64, tol_res: f64) -> Result<ResonanceClass> {
    positive("length", length)?;
    positive("lambda_pump", lambda_pump)?;
    if !(tol_res > 0.0 && tol_res < 0.25) {
        return Err(Error::invalid(
            "tol_res",
            format!("{tol_res} outside (0, 0.25); resonance classes would overlap"),
        ));
    }
    let order = length / lambda_pump;
    let fractional_order = order - order.floor();
    let kind = if (fractional_order - fractional_order.round()).abs() <= tol_res {
        ResonanceKind::Resonant
    } else if (fractional_order - 0.5).abs() <= tol_res {
        ResonanceKind::AntiResonant
    } else {
        ResonanceKind::Neither
    };
    Ok(ResonanceClass {
        kind,
        fractional_order,
    })
}

/// The interferometer: an optional cavity in each arm plus the source.
///
/// The delay convention is `delta = delta_i - delta_s`; with a cavity in the
/// idler arm only, interference regions sit at `delta = k tau_c`, `k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferometerConfig {
    pub idler_cavity: Option<Cavity>,
    pub signal_cavity: Option<Cavity>,
    pub profile: SpectralProfile,
}

impl InterferometerConfig {
    pub fn bare(profile: SpectralProfile) -> Self {
        Self {
            idler_cavity: None,
            signal_cavity: None,
            profile,
        }
    }

    pub fn one_cavity(cavity: Cavity, profile: SpectralProfile) -> Self {
        Self {
            idler_cavity: Some(cavity),
            signal_cavity: None,
            profile,
        }
    }

    pub fn two_cavities(idler: Cavity, signal: Cavity, profile: SpectralProfile) -> Self {
        Self {
            idler_cavity: Some(idler),
            signal_cavity: Some(signal),
            profile,
        }
    }

    pub fn idler(&self) -> Cavity {
        self.idler_cavity.unwrap_or_else(Cavity::absent)
    }

    pub fn signal(&self) -> Cavity {
        self.signal_cavity.unwrap_or_else(Cavity::absent)
    }

    pub fn cavity_count(&self) -> usize {
        self.idler_cavity.is_some() as usize + self.signal_cavity.is_some() as usize
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("{value} must be finite and > 0"),
        ))
    }
}
