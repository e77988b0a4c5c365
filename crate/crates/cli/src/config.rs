//! Flat `key = value` run configuration. Command-line flags use the same
//! names and override the file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use hom_cavity::{Cavity, InterferometerConfig, QuadratureSpec, SeriesTolerances, SpectralProfile};

use crate::CliError;

/// Every recognised key, in the order shown by `--help`.
pub const KEYS: &[(&str, &str)] = &[
    (
        "mode",
        "sweep | cavity-sweep | reflectance-sweep | regions | platform | xor | verify",
    ),
    (
        "lambda_nm",
        "central down-converted wavelength [nm] (default 826.2)",
    ),
    (
        "pump_lambda_nm",
        "pump wavelength [nm] (default lambda_nm/2)",
    ),
    ("delta_lambda_nm", "spectral bandwidth [nm] (default 8)"),
    (
        "idler_length_mm",
        "idler cavity length [mm]; omit for no idler cavity",
    ),
    ("idler_reflectance", "idler mirror reflectance"),
    (
        "idler_transmittance",
        "idler mirror transmittance (default 1 - R)",
    ),
    (
        "signal_length_mm",
        "signal cavity length [mm]; omit for no signal cavity",
    ),
    ("signal_reflectance", "signal mirror reflectance"),
    (
        "signal_transmittance",
        "signal mirror transmittance (default 1 - R)",
    ),
    ("delta_min_ps", "first delay of a sweep [ps]"),
    ("delta_max_ps", "last delay of a sweep [ps]"),
    ("samples", "number of sweep points"),
    ("delay_ps", "fixed delay for scans and platform [ps]"),
    ("length_min_mm", "cavity-sweep start [mm]"),
    ("length_max_mm", "cavity-sweep end [mm]"),
    ("reflectance_min", "reflectance-sweep start"),
    ("reflectance_max", "reflectance-sweep end"),
    ("eps_weight", "series truncation weight (default 1e-10)"),
    ("eps_envelope", "envelope pruning threshold (default 1e-14)"),
    (
        "flat_tol",
        "relative flatness threshold for regions (default 1e-3)",
    ),
    (
        "sym_threshold",
        "symmetry score separating SY from NS (default 0.05)",
    ),
    ("bit_idler", "xor input bit on the idler arm"),
    ("bit_signal", "xor input bit on the signal arm"),
    (
        "resonant_length_mm",
        "xor length encoding bit 0 [mm] (default 0.404838)",
    ),
    (
        "antiresonant_length_mm",
        "xor length encoding bit 1 [mm] (default 0.4050447)",
    ),
    ("quad_points", "oracle trapezoid nodes (default 65536)"),
    (
        "quad_halfwidth",
        "oracle support half-width in units of 1/dw (default 8)",
    ),
    (
        "verify_tolerance",
        "maximum oracle/series relative deviation (default 1e-6)",
    ),
    (
        "self_test",
        "perturb the series by 1e-3 before verifying (true/false)",
    ),
    ("threads", "worker threads (default: all cores)"),
    ("output", "output file (default: stdout)"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    CavitySweep,
    ReflectanceSweep,
    Regions,
    Platform,
    Xor,
    Verify,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "sweep" => Mode::Sweep,
            "cavity-sweep" => Mode::CavitySweep,
            "reflectance-sweep" => Mode::ReflectanceSweep,
            "regions" => Mode::Regions,
            "platform" => Mode::Platform,
            "xor" => Mode::Xor,
            "verify" => Mode::Verify,
            other => return Err(CliError::Config(format!("unknown mode '{other}'"))),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sweep => "sweep",
            Mode::CavitySweep => "cavity-sweep",
            Mode::ReflectanceSweep => "reflectance-sweep",
            Mode::Regions => "regions",
            Mode::Platform => "platform",
            Mode::Xor => "xor",
            Mode::Verify => "verify",
        })
    }
}

/// Parses a config file body. `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
        let key = key.trim();
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Config(format!(
                "line {}: unknown key '{key}'",
                n + 1
            )));
        }
        if map
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(CliError::Config(format!(
                "line {}: duplicate key '{key}'",
                n + 1
            )));
        }
    }
    Ok(map)
}

/// Typed access to the merged key/value map.
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Self { map }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("{key}: cannot parse '{raw}'"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str, mode: Mode) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("mode {mode} requires {key}")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.map.get(key).map(String::as_str) {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") | Some("") => Ok(true),
            Some(other) => Err(CliError::Config(format!(
                "{key}: expected true or false, got '{other}'"
            ))),
        }
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        self.map
            .get("mode")
            .ok_or_else(|| CliError::Config("no mode given".into()))?
            .parse()
    }

    pub fn profile(&self) -> Result<SpectralProfile, CliError> {
        let lambda = self.or("lambda_nm", 826.2)?;
        let pump = self.or("pump_lambda_nm", lambda / 2.0)?;
        let bandwidth = self.or("delta_lambda_nm", 8.0)?;
        Ok(SpectralProfile::new(
            lambda * 1e-9,
            pump * 1e-9,
            bandwidth * 1e-9,
        )?)
    }

    fn cavity(&self, arm: &str) -> Result<Option<Cavity>, CliError> {
        let Some(length) = self.get::<f64>(&format!("{arm}_length_mm"))? else {
            return Ok(None);
        };
        let r_key = format!("{arm}_reflectance");
        let r: f64 = self
            .get(&r_key)?
            .ok_or_else(|| CliError::Config(format!("{arm}_length_mm given without {r_key}")))?;
        let t = self.or(&format!("{arm}_transmittance"), 1.0 - r)?;
        Ok(Some(Cavity::with_losses(length * 1e-3, r, t)?))
    }

    pub fn interferometer(&self) -> Result<InterferometerConfig, CliError> {
        Ok(InterferometerConfig {
            idler_cavity: self.cavity("idler")?,
            signal_cavity: self.cavity("signal")?,
            profile: self.profile()?,
        })
    }

    pub fn tolerances(&self) -> Result<SeriesTolerances, CliError> {
        let defaults = SeriesTolerances::default();
        Ok(SeriesTolerances::new(
            self.or("eps_weight", defaults.eps_weight)?,
            self.or("eps_envelope", defaults.eps_envelope)?,
        )?)
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        let defaults = QuadratureSpec::default();
        Ok(QuadratureSpec::new(
            self.or("quad_points", defaults.n_points)?,
            self.or("quad_halfwidth", defaults.support_halfwidth)?,
        )?)
    }
}
