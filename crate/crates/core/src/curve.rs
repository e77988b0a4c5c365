//! Delay sweeps and single-parameter scans.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Cavity, InterferometerConfig};
use crate::series::{SeriesEvaluator, SeriesTolerances};

/// Coincidence rate sampled over an increasing set of delays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceCurve {
    delays: Vec<f64>,
    rates: Vec<f64>,
    config: Option<InterferometerConfig>,
    /// Samples whose raw series value was negative and clamped to zero.
    clamped: usize,
}

impl CoincidenceCurve {
    /// Builds a curve from raw samples; negative rates are clamped.
    pub fn new(delays: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if delays.len() != rates.len() {
            return Err(Error::invalid(
                "curve",
                format!("{} delays but {} rates", delays.len(), rates.len()),
            ));
        }
        if delays
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::invalid(
                "curve",
                "delays must be strictly increasing",
            ));
        }
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("curve", "rates must be finite"));
        }
        let clamped = rates.iter().filter(|&&r| r < 0.0).count();
        let rates = rates.into_iter().map(|r| r.max(0.0)).collect();
        Ok(Self {
            delays,
            rates,
            config: None,
            clamped,
        })
    }

    pub fn with_config(mut self, config: InterferometerConfig) -> Self {
        self.config = Some(config);
        self
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn config(&self) -> Option<&InterferometerConfig> {
        self.config.as_ref()
    }

    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    /// Largest gap between consecutive delays.
    pub fn max_step(&self) -> f64 {
        self.delays
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.delays.iter().copied().zip(self.rates.iter().copied())
    }

    /// Returns a copy with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rates: self.rates.iter().map(|r| r * factor).collect(),
            ..self.clone()
        }
    }
}

/// `n` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    let span = max - min;
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                max
            } else {
                min + span * (k as f64 / last)
            }
        })
        .collect()
}

fn check_grid(name: &'static str, min: f64, max: f64, n: usize) -> Result<()> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::invalid(
            name,
            format!("range [{min}, {max}] is empty"),
        ));
    }
    if n < 2 {
        return Err(Error::invalid(
            name,
            format!("need at least 2 samples, got {n}"),
        ));
    }
    Ok(())
}

/// Evaluates the coincidence rate on a uniform delay grid.
///
/// Samples are computed in parallel; each is independent, so the result is
/// identical to a sequential evaluation.
pub fn sweep(
    config: &InterferometerConfig,
    delta_min: f64,
    delta_max: f64,
    n_samples: usize,
    tol: &SeriesTolerances,
) -> Result<CoincidenceCurve> {
    check_grid("sweep", delta_min, delta_max, n_samples)?;
    let evaluator = SeriesEvaluator::new(config, tol)?;
    let delays = linspace(delta_min, delta_max, n_samples);
    let rates: Vec<f64> = delays.par_iter().map(|&d| evaluator.raw_rate(d)).collect();
    Ok(CoincidenceCurve::new(delays, rates)?.with_config(*config))
}

/// Rate as a function of one swept parameter at a fixed delay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterScan {
    pub values: Vec<f64>,
    pub rates: Vec<f64>,
    pub delay: f64,
}

fn scan_with<F>(
    values: Vec<f64>,
    delay: f64,
    tol: &SeriesTolerances,
    build: F,
) -> Result<ParameterScan>
where
    F: Fn(f64) -> Result<InterferometerConfig> + Sync,
{
    let rates = values
        .par_iter()
        .map(|&v| {
            let config = build(v)?;
            Ok(SeriesEvaluator::new(&config, tol)?.rate(delay))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ParameterScan {
        values,
        rates,
        delay,
    })
}

/// Sweeps the idler cavity length, keeping its mirrors and the signal arm fixed.
pub fn scan_idler_length(
    config: &InterferometerConfig,
    length_min: f64,
    length_max: f64,
    n_samples: usize,
    delay: f64,
    tol: &SeriesTolerances,
) -> Result<ParameterScan> {
    check_grid("cavity scan", length_min, length_max, n_samples)?;
    let idler = config
        .idler_cavity
        .ok_or_else(|| Error::invalid("idler_cavity", "a length scan needs an idler cavity"))?;
    scan_with(
        linspace(length_min, length_max, n_samples),
        delay,
        tol,
        |length| {
            Ok(InterferometerConfig {
                idler_cavity: Some(idler.with_length(length)?),
                ..*config
            })
        },
    )
}

/// Sweeps the idler mirror reflectance with lossless mirrors, `T = 1 - R`.
pub fn scan_idler_reflectance(
    config: &InterferometerConfig,
    reflectances: Vec<f64>,
    delay: f64,
    tol: &SeriesTolerances,
) -> Result<ParameterScan> {
    let idler = config.idler_cavity.ok_or_else(|| {
        Error::invalid("idler_cavity", "a reflectance scan needs an idler cavity")
    })?;
    scan_with(reflectances, delay, tol, |r| {
        Ok(InterferometerConfig {
            idler_cavity: Some(Cavity::lossless(idler.length(), r)?),
            ..*config
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpectralProfile;

    fn bare() -> InterferometerConfig {
        InterferometerConfig::bare(SpectralProfile::degenerate(826.2e-9, 8e-9).unwrap())
    }

    #[test]
    fn linspace_endpoints() {
        let xs = linspace(-1.0, 2.0, 4);
        assert_eq!(xs, vec![-1.0, 0.0, 1.0, 2.0]);
        let ys = linspace(-200e-15, 200e-15, 401);
        assert_eq!(ys[200], 0.0);
        assert_eq!(*ys.last().unwrap(), 200e-15);
    }

    #[test]
    fn bare_sweep_is_symmetric_dip() {
        let curve = sweep(
            &bare(),
            -200e-15,
            200e-15,
            401,
            &SeriesTolerances::default(),
        )
        .unwrap();
        assert_eq!(curve.len(), 401);
        assert_eq!(curve.rates()[200], 0.0);
        for i in 0..200 {
            assert!((curve.rates()[i] - curve.rates()[400 - i]).abs() < 1e-15);
        }
        let (argmin, _) = curve
            .rates()
            .iter()
            .enumerate()
            .fold(
                (0, f64::MAX),
                |acc, (i, &r)| if r < acc.1 { (i, r) } else { acc },
            );
        assert_eq!(argmin, 200);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let tol = SeriesTolerances::default();
        assert!(sweep(&bare(), 1.0, 0.0, 10, &tol).is_err());
        assert!(sweep(&bare(), 0.0, 1.0, 1, &tol).is_err());
    }

    #[test]
    fn curve_validation_and_clamp() {
        assert!(CoincidenceCurve::new(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(CoincidenceCurve::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        let c = CoincidenceCurve::new(vec![0.0, 1.0], vec![-1e-17, 0.5]).unwrap();
        assert_eq!(c.rates(), &[0.0, 0.5]);
        assert_eq!(c.clamped(), 1);
    }

    #[test]
    fn parallel_matches_sequential() {
        let profile = SpectralProfile::degenerate(826.2e-9, 8e-9).unwrap();
        let config = InterferometerConfig::two_cavities(
            Cavity::lossless(0.4050447e-3, 0.7).unwrap(),
            Cavity::lossless(0.404838e-3, 0.7).unwrap(),
            profile,
        );
        let tol = SeriesTolerances::default();
        let curve = sweep(&config, -3e-12, 3e-12, 301, &tol).unwrap();
        let evaluator = SeriesEvaluator::new(&config, &tol).unwrap();
        for (d, r) in curve.iter() {
            assert_eq!(r.to_bits(), evaluator.rate(d).to_bits());
        }
    }
}
