//! Coincidence-rate simulation for a Hong-Ou-Mandel interferometer with a
//! symmetric Fabry-Perot cavity in one or both arms.
//!
//! The [`series`] module evaluates the rate from its closed-form Gaussian
//! series, [`quadrature`] recomputes it independently by integrating the
//! cavity transfer functions over frequency, and [`analysis`] extracts
//! interference regions, pattern symmetry and the cavity-encoded XOR gate.
//!
//! ```
//! use hom_cavity::{Cavity, InterferometerConfig, SeriesTolerances, SpectralProfile};
//!
//! let profile = SpectralProfile::degenerate(826.2e-9, 8e-9)?;
//! let cavity = Cavity::lossless(0.404838e-3, 0.7)?;
//! let rate = hom_cavity::rate_one_cavity(&cavity, &profile, 0.66733e-12, &SeriesTolerances::default())?;
//! assert!((rate - 0.09 / 0.51).abs() < 1e-9);
//! # Ok::<(), hom_cavity::Error>(())
//! ```

pub mod analysis;
pub mod curve;
pub mod error;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod series;

pub use analysis::{
    deepest_region_order, detect_regions, gaussian_overlap, platform_one_cavity, region_amplitude,
    symmetry_score, xor_gate, Pattern, RegionAnalysis, RegionKind, RegionReport, XorBase,
    XorResult,
};
pub use curve::{sweep, CoincidenceCurve, ParameterScan};
pub use error::{Error, Result};
pub use model::{
    cavity_transit_time, classify_cavity, delta_omega, Cavity, InterferometerConfig,
    ResonanceClass, ResonanceKind, SpectralProfile, SPEED_OF_LIGHT,
};
pub use quadrature::{gaussian_term_identity, mu_tilde, rate_spectral, QuadratureSpec};
pub use series::{
    rate_bare, rate_one_cavity, rate_two_cavity, truncation_order, SeriesEvaluator,
    SeriesTolerances,
};
