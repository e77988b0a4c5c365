//! Pattern symmetry and the cavity-encoded XOR gate.
//!
//! Input bits select the cavity length in each arm: 0 for a resonant length,
//! 1 for an anti-resonant one. A coincidence pattern that is symmetric about
//! zero delay reads as output 0, an asymmetric one as output 1.

use serde::Serialize;

use crate::curve::{sweep, CoincidenceCurve};
use crate::error::{Error, Result};
use crate::model::{Cavity, InterferometerConfig, SpectralProfile};
use crate::series::SeriesTolerances;

/// Scores at or above this read as a non-symmetric pattern.
pub const SYM_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pattern {
    #[serde(rename = "SY")]
    Symmetric,
    #[serde(rename = "NS")]
    NotSymmetric,
}

impl Pattern {
    pub fn bit(self) -> u8 {
        match self {
            Pattern::Symmetric => 0,
            Pattern::NotSymmetric => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pattern::Symmetric => "SY",
            Pattern::NotSymmetric => "NS",
        }
    }
}

/// Largest mirror-image mismatch `|N(d) - N(-d)|`, relative to the curve's range.
pub fn symmetry_score(curve: &CoincidenceCurve) -> Result<f64> {
    let delays = curve.delays();
    let n = delays.len();
    if n < 3 || n.is_multiple_of(2) {
        let (min, max) = (
            delays.first().copied().unwrap_or(0.0),
            delays.last().copied().unwrap_or(0.0),
        );
        return Err(Error::AsymmetricSweep { min, max });
    }
    let (min, max) = (delays[0], delays[n - 1]);
    if (min + max).abs() > 1e-9 * (max - min) || delays[n / 2].abs() > 1e-9 * (max - min) {
        return Err(Error::AsymmetricSweep { min, max });
    }
    let rates = curve.rates();
    let mismatch = (0..n / 2)
        .map(|i| (rates[i] - rates[n - 1 - i]).abs())
        .fold(0.0, f64::max);
    let hi = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(mismatch / (hi - lo).max(1e-12))
}

/// Fixed part of the gate: mirrors, source, the two reference lengths and
/// how the output pattern is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XorBase {
    pub reflectance: f64,
    pub transmittance: f64,
    pub profile: SpectralProfile,
    pub resonant_length: f64,
    pub antiresonant_length: f64,
    /// Sweep runs over `[-sweep_halfwidth, sweep_halfwidth]`.
    pub sweep_halfwidth: f64,
    /// Odd, so that zero delay is sampled.
    pub samples: usize,
    pub tol: SeriesTolerances,
    pub sym_threshold: f64,
}

impl XorBase {
    pub fn new(
        reflectance: f64,
        transmittance: f64,
        profile: SpectralProfile,
        resonant_length: f64,
        antiresonant_length: f64,
    ) -> Self {
        Self {
            reflectance,
            transmittance,
            profile,
            resonant_length,
            antiresonant_length,
            sweep_halfwidth: 8e-12,
            samples: 1601,
            tol: SeriesTolerances::default(),
            sym_threshold: SYM_THRESHOLD,
        }
    }

    fn cavity_for(&self, bit: u8) -> Result<Cavity> {
        let length = match bit {
            0 => self.resonant_length,
            1 => self.antiresonant_length,
            other => return Err(Error::invalid("bit", format!("{other} is not 0 or 1"))),
        };
        Cavity::with_losses(length, self.reflectance, self.transmittance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XorResult {
    pub input_idler: u8,
    pub input_signal: u8,
    pub symmetry_score: f64,
    pub output: u8,
    pub pattern: Pattern,
}

pub fn xor_gate(bit_idler: u8, bit_signal: u8, base: &XorBase) -> Result<XorResult> {
    let config = InterferometerConfig::two_cavities(
        base.cavity_for(bit_idler)?,
        base.cavity_for(bit_signal)?,
        base.profile,
    );
    let curve = sweep(
        &config,
        -base.sweep_halfwidth,
        base.sweep_halfwidth,
        base.samples,
        &base.tol,
    )?;
    let score = symmetry_score(&curve)?;
    let pattern = if score < base.sym_threshold {
        Pattern::Symmetric
    } else {
        Pattern::NotSymmetric
    };
    Ok(XorResult {
        input_idler: bit_idler,
        input_signal: bit_signal,
        symmetry_score: score,
        output: pattern.bit(),
        pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> XorBase {
        XorBase::new(
            0.7,
            0.3,
            SpectralProfile::degenerate(826.2e-9, 8e-9).unwrap(),
            0.404838e-3,
            0.4050447e-3,
        )
    }

    #[test]
    fn score_rejects_asymmetric_ranges() {
        let even = CoincidenceCurve::new(vec![-1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert!(symmetry_score(&even).is_err());
        let shifted = CoincidenceCurve::new(vec![-1.0, 0.5, 2.0], vec![0.0, 0.0, 0.0]).unwrap();
        assert!(symmetry_score(&shifted).is_err());
    }

    #[test]
    fn score_of_even_and_odd_shapes() {
        let xs: Vec<f64> = (-10..=10).map(f64::from).collect();
        let even = CoincidenceCurve::new(xs.clone(), xs.iter().map(|x| x * x).collect()).unwrap();
        assert_eq!(symmetry_score(&even).unwrap(), 0.0);
        let odd = CoincidenceCurve::new(xs.clone(), xs.iter().map(|x| x + 10.0).collect()).unwrap();
        assert!((symmetry_score(&odd).unwrap() - 1.0).abs() < 1e-15);
        let flat = CoincidenceCurve::new(xs, vec![0.3; 21]).unwrap();
        assert_eq!(symmetry_score(&flat).unwrap(), 0.0);
    }

    #[test]
    fn bad_bits_rejected() {
        assert!(xor_gate(2, 0, &base()).is_err());
    }

    #[test]
    fn truth_table() {
        let b = base();
        for (i, s) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let result = xor_gate(i, s, &b).unwrap();
            assert_eq!(result.output, i ^ s, "{result:?}");
            assert_eq!(result.pattern.bit(), result.output);
        }
    }
}
