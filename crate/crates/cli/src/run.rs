use rayon::prelude::*;
use serde::Serialize;

use hom_cavity::curve::{linspace, scan_idler_length, scan_idler_reflectance};
use hom_cavity::io::{
    to_json_string, write_curve_csv, write_length_scan_csv, write_reflectance_scan_csv,
};
use hom_cavity::quadrature::{oracle_metadata, OracleMetadata};
use hom_cavity::{
    detect_regions, platform_one_cavity, rate_spectral, sweep, xor_gate, Error, RegionKind,
    SeriesEvaluator, XorBase,
};

use crate::config::{Mode, Settings};
use crate::CliError;

const PS: f64 = 1e-12;
const MM: f64 = 1e-3;

/// Output of a run: the bytes to emit and, for `verify`, a failure to
/// report after the bytes are written.
pub struct Outcome {
    pub body: Vec<u8>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(body: Vec<u8>) -> Self {
        Self {
            body,
            failure: None,
        }
    }
}

pub fn run(settings: &Settings) -> Result<Outcome, CliError> {
    let mode = settings.mode()?;
    match mode {
        Mode::Sweep => sweep_mode(settings, mode),
        Mode::CavitySweep => cavity_sweep(settings, mode),
        Mode::ReflectanceSweep => reflectance_sweep(settings, mode),
        Mode::Regions => regions(settings, mode),
        Mode::Platform => platform(settings, mode),
        Mode::Xor => xor(settings, mode),
        Mode::Verify => verify(settings),
    }
}

fn delay_range(settings: &Settings, mode: Mode) -> Result<(f64, f64, usize), CliError> {
    Ok((
        settings.require::<f64>("delta_min_ps", mode)? * PS,
        settings.require::<f64>("delta_max_ps", mode)? * PS,
        settings.require("samples", mode)?,
    ))
}

fn sweep_mode(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let (min, max, n) = delay_range(settings, mode)?;
    let curve = sweep(&config, min, max, n, &settings.tolerances()?)?;
    let mut body = Vec::new();
    write_curve_csv(&curve, &mut body)?;
    Ok(Outcome::ok(body))
}

fn cavity_sweep(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let scan = scan_idler_length(
        &config,
        settings.require::<f64>("length_min_mm", mode)? * MM,
        settings.require::<f64>("length_max_mm", mode)? * MM,
        settings.require("samples", mode)?,
        settings.require::<f64>("delay_ps", mode)? * PS,
        &settings.tolerances()?,
    )?;
    let mut body = Vec::new();
    write_length_scan_csv(&scan, &mut body)?;
    Ok(Outcome::ok(body))
}

fn reflectance_sweep(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let values = linspace(
        settings.require("reflectance_min", mode)?,
        settings.require("reflectance_max", mode)?,
        settings.require("samples", mode)?,
    );
    let scan = scan_idler_reflectance(
        &config,
        values,
        settings.require::<f64>("delay_ps", mode)? * PS,
        &settings.tolerances()?,
    )?;
    let mut body = Vec::new();
    write_reflectance_scan_csv(&scan, &mut body)?;
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct RegionOut {
    order: usize,
    kind: RegionKind,
    center_delay_ps: f64,
    extremum_delay_ps: f64,
    extremum_rate: f64,
    closed_form_rate: Option<f64>,
}

#[derive(Serialize)]
struct RegionsOut {
    platform: f64,
    regions: Vec<RegionOut>,
}

fn regions(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let (min, max, n) = delay_range(settings, mode)?;
    let curve = sweep(&config, min, max, n, &settings.tolerances()?)?;
    let analysis = detect_regions(&curve, &config, settings.or("flat_tol", 1e-3)?)?;
    let out = RegionsOut {
        platform: analysis.platform,
        regions: analysis
            .regions
            .into_iter()
            .map(|r| RegionOut {
                order: r.order,
                kind: r.kind,
                center_delay_ps: r.center_delay / PS,
                extremum_delay_ps: r.extremum_delay / PS,
                extremum_rate: r.extremum_rate,
                closed_form_rate: r.closed_form_rate,
            })
            .collect(),
    };
    Ok(Outcome::ok(to_json_string(&out)?.into_bytes()))
}

#[derive(Serialize)]
struct PlatformOut {
    delay_ps: f64,
    /// Closed-form platform height; `None` with two cavities, where the
    /// platform depends on both lengths and only the series value applies.
    platform: Option<f64>,
    rate: f64,
}

fn platform(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let delay = settings.require::<f64>("delay_ps", mode)? * PS;
    let rate = SeriesEvaluator::new(&config, &settings.tolerances()?)?.rate(delay);
    let platform = match (config.idler_cavity, config.signal_cavity) {
        (None, None) => Some(1.0),
        (Some(c), None) | (None, Some(c)) => Some(platform_one_cavity(&c)?),
        (Some(_), Some(_)) => None,
    };
    let out = PlatformOut {
        delay_ps: delay / PS,
        platform,
        rate,
    };
    Ok(Outcome::ok(to_json_string(&out)?.into_bytes()))
}

fn xor(settings: &Settings, mode: Mode) -> Result<Outcome, CliError> {
    let r = settings.or("idler_reflectance", 0.7)?;
    let t = settings.or("idler_transmittance", 1.0 - r)?;
    let mut base = XorBase::new(
        r,
        t,
        settings.profile()?,
        settings.or("resonant_length_mm", 0.404838)? * MM,
        settings.or("antiresonant_length_mm", 0.4050447)? * MM,
    );
    base.tol = settings.tolerances()?;
    base.sym_threshold = settings.or("sym_threshold", base.sym_threshold)?;
    if let Some(max) = settings.get::<f64>("delta_max_ps")? {
        base.sweep_halfwidth = max * PS;
    }
    base.samples = settings.or("samples", base.samples)?;
    let result = xor_gate(
        settings.require("bit_idler", mode)?,
        settings.require("bit_signal", mode)?,
        &base,
    )?;
    Ok(Outcome::ok(to_json_string(&result)?.into_bytes()))
}

#[derive(Serialize)]
struct VerifyReport {
    max_relative_error: f64,
    worst_delay_ps: f64,
    samples: usize,
    tolerance: f64,
    self_test: bool,
    passed: bool,
    oracle: OracleMetadata,
}

/// Relative deviation, with a floor so the exact zero of the bare dip does
/// not blow up.
fn relative_error(series: f64, oracle: f64) -> f64 {
    (series - oracle).abs() / oracle.abs().max(1e-6)
}

fn verify(settings: &Settings) -> Result<Outcome, CliError> {
    let config = settings.interferometer()?;
    let spec = settings.quadrature()?;
    let tolerance = settings.or("verify_tolerance", 1e-6)?;
    let self_test = settings.flag("self_test")?;
    let delays = linspace(
        settings.or("delta_min_ps", -2.0)? * PS,
        settings.or("delta_max_ps", 8.0)? * PS,
        settings.or("samples", 50)?,
    );
    let series = SeriesEvaluator::new(&config, &settings.tolerances()?)?;
    let perturbation = if self_test { 1.0 + 1e-3 } else { 1.0 };
    let errors = delays
        .par_iter()
        .map(|&d| {
            let oracle = rate_spectral(&config, d, &spec)?;
            Ok(relative_error(series.rate(d) * perturbation, oracle))
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let (worst_index, max_relative_error) = errors
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, e)| if e > acc.1 { (i, e) } else { acc });
    let passed = max_relative_error <= tolerance;
    let report = VerifyReport {
        max_relative_error,
        worst_delay_ps: delays.get(worst_index).copied().unwrap_or(0.0) / PS,
        samples: delays.len(),
        tolerance,
        self_test,
        passed,
        oracle: oracle_metadata(&config, &spec)?,
    };
    Ok(Outcome {
        body: to_json_string(&report)?.into_bytes(),
        failure: (!passed).then(|| {
            Error::OracleMismatch {
                deviation: max_relative_error,
                tolerance,
            }
            .into()
        }),
    })
}
