//! Locating and classifying interference regions on a sampled curve.

use serde::Serialize;

use super::{platform_one_cavity, region_amplitude};
use crate::curve::CoincidenceCurve;
use crate::error::{Error, Result};
use crate::model::InterferometerConfig;
use crate::series::{truncation_order, SeriesTolerances};

/// Default flatness threshold, as a fraction of the platform.
pub const DEFAULT_FLAT_TOL: f64 = 1e-3;

/// Samples required within +-sigma of each region center.
const MIN_SAMPLES_PER_SIGMA: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    Peak,
    Valley,
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    /// 1 for the region at zero delay, growing with the number of internal
    /// reflections that feed the region.
    pub order: usize,
    pub center_delay: f64,
    /// Sample at which the deviation from the platform is largest.
    pub extremum_delay: f64,
    pub extremum_rate: f64,
    pub kind: RegionKind,
    pub closed_form_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionAnalysis {
    pub platform: f64,
    pub regions: Vec<RegionReport>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    center: f64,
    shells: usize,
}

/// Region centers `tau_i b - tau_s a` for reflection counts `a` (signal) and
/// `b` (idler), merged when closer than one sigma. Each cluster keeps the
/// member fed by the fewest reflections.
fn candidate_centers(config: &InterferometerConfig, sigma: f64) -> Result<Vec<Candidate>> {
    let eps = SeriesTolerances::default().eps_weight;
    let (idler, signal) = (config.idler(), config.signal());
    let b_max = truncation_order(idler.reflectance(), eps).max(1);
    let a_max = truncation_order(signal.reflectance(), eps).max(1);
    let (tau_i, tau_s) = (idler.transit_time(), signal.transit_time());

    let mut raw: Vec<Candidate> = (0..a_max)
        .flat_map(|a| {
            (0..b_max).map(move |b| Candidate {
                center: tau_i * b as f64 - tau_s * a as f64,
                shells: a + b,
            })
        })
        .collect();
    raw.sort_by(|x, y| x.center.total_cmp(&y.center).then(x.shells.cmp(&y.shells)));

    let mut clusters: Vec<Candidate> = Vec::new();
    let mut last_center = f64::NEG_INFINITY;
    for cand in raw {
        match clusters.last_mut() {
            Some(rep) if cand.center - last_center < sigma => {
                if cand.shells < rep.shells {
                    *rep = cand;
                }
            }
            _ => clusters.push(cand),
        }
        last_center = cand.center;
    }

    for pair in clusters.windows(2) {
        if pair[1].center - pair[0].center < 4.0 * sigma {
            return Err(Error::OverlappingRegions {
                first: pair[0].center,
                second: pair[1].center,
                min_gap: 4.0 * sigma,
            });
        }
    }
    Ok(clusters)
}

fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}

fn estimate_platform(
    curve: &CoincidenceCurve,
    config: &InterferometerConfig,
    centers: &[Candidate],
    sigma: f64,
) -> Result<f64> {
    match (config.idler_cavity, config.signal_cavity) {
        (None, None) => Ok(1.0),
        (Some(c), None) | (None, Some(c)) => platform_one_cavity(&c),
        _ => {
            let far: Vec<f64> = curve
                .iter()
                .filter(|(d, _)| centers.iter().all(|c| (d - c.center).abs() > 4.0 * sigma))
                .map(|(_, r)| r)
                .collect();
            median(far).ok_or_else(|| {
                Error::invalid(
                    "curve",
                    "no samples lie farther than 4 sigma from every region",
                )
            })
        }
    }
}

/// Finds the interference regions of `curve` and classifies each against the
/// platform. `flat_tol` is relative to the platform value.
pub fn detect_regions(
    curve: &CoincidenceCurve,
    config: &InterferometerConfig,
    flat_tol: f64,
) -> Result<RegionAnalysis> {
    if curve.len() < 2 {
        return Err(Error::invalid("curve", "need at least two samples"));
    }
    let sigma = config.profile.region_sigma();
    let max_step = 2.0 * sigma / MIN_SAMPLES_PER_SIGMA;
    let step = curve.max_step();
    if step > max_step {
        return Err(Error::UnderSampled { step, max_step });
    }

    let centers = candidate_centers(config, sigma)?;
    let platform = estimate_platform(curve, config, &centers, sigma)?;
    let threshold = flat_tol * platform;
    let (lo, hi) = (curve.delays()[0], *curve.delays().last().unwrap());
    let one_cavity = match (config.idler_cavity, config.signal_cavity) {
        (Some(c), None) => Some(c),
        _ => None,
    };

    let mut regions = Vec::new();
    for cand in centers {
        let (from, to) = (cand.center - 2.0 * sigma, cand.center + 2.0 * sigma);
        if from < lo || to > hi {
            continue;
        }
        let Some((extremum_delay, extremum_rate)) = curve
            .iter()
            .filter(|(d, _)| *d >= from && *d <= to)
            .max_by(|a, b| (a.1 - platform).abs().total_cmp(&(b.1 - platform).abs()))
        else {
            continue;
        };
        let deviation = extremum_rate - platform;
        let kind = if deviation > threshold {
            RegionKind::Peak
        } else if deviation < -threshold {
            RegionKind::Valley
        } else {
            RegionKind::Flat
        };
        let order = cand.shells + 1;
        let closed_form_rate = match (config.cavity_count(), one_cavity) {
            (0, _) => Some(0.0),
            (1, Some(c)) => Some(region_amplitude(order, &c, config.profile.lambda_pump())?),
            _ => None,
        };
        regions.push(RegionReport {
            order,
            center_delay: cand.center,
            extremum_delay,
            extremum_rate,
            kind,
            closed_form_rate,
        });
    }
    Ok(RegionAnalysis { platform, regions })
}

/// Full width at half maximum of the feature nearest `center`, measured as
/// deviation from `platform` and searched within `+-4 sigma`.
pub fn region_width(
    curve: &CoincidenceCurve,
    center: f64,
    platform: f64,
    sigma: f64,
) -> Option<f64> {
    let delays = curve.delays();
    let dev: Vec<f64> = curve.rates().iter().map(|r| (r - platform).abs()).collect();
    let window: Vec<usize> = (0..delays.len())
        .filter(|&i| (delays[i] - center).abs() <= 4.0 * sigma)
        .collect();
    let &peak = window.iter().max_by(|&&a, &&b| dev[a].total_cmp(&dev[b]))?;
    let half = 0.5 * dev[peak];
    if half == 0.0 {
        return None;
    }
    let crossing = |from: usize, to: usize| {
        // linear interpolation between the last sample above and first below
        let t = (dev[from] - half) / (dev[from] - dev[to]);
        delays[from] + t * (delays[to] - delays[from])
    };
    let mut left = peak;
    while dev[left] > half {
        if left == 0 || !window.contains(&(left - 1)) {
            return None;
        }
        left -= 1;
    }
    let mut right = peak;
    while dev[right] > half {
        if right + 1 == delays.len() || !window.contains(&(right + 1)) {
            return None;
        }
        right += 1;
    }
    Some(crossing(right - 1, right) - crossing(left + 1, left))
}
