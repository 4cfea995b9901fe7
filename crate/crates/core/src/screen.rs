//! Double-slit detection-screen density and fringe visibility.
//!
//! Layout: slit Q₀ sits at `y = +d/2`, slit Q₁ at `y = −d/2`, and the screen
//! is a plane at distance `L`. Each slit radiates an unnormalized spherical
//! wave `e^{ikr}/r`, so densities are relative (units 1/m²). Slits are
//! treated as points; no width envelope is modeled.

use thiserror::Error;

use crate::density::{Basis, Complex, DensityMatrix, Slit};
use crate::metrics::{self, MetricError};

/// Normalized patterns whose visibility is below this are reported as flat
/// without a fringe-count check.
pub const FLAT_VISIBILITY: f64 = 1e-9;
/// Visibility extraction needs this many crossings of the mid level, i.e.
/// two full fringe periods.
pub const MIN_CROSSINGS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScreenError {
    #[error("{name} must be finite and positive, got {value}")]
    InvalidGeometry { name: &'static str, value: f64 },
    #[error("invalid sweep: need y_min < y_max and at least 2 points (got [{y_min}, {y_max}], {n_points} points)")]
    InvalidRange { y_min: f64, y_max: f64, n_points: usize },
    #[error("pattern covers {crossings} mid-level crossings; at least {MIN_CROSSINGS} (two fringe periods) required")]
    InsufficientFringes { crossings: usize },
    #[error("pattern has no single-slit envelope to normalize by")]
    EmptyEnvelope,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlitGeometry {
    slit_separation: f64,
    screen_distance: f64,
    wavenumber: f64,
}

impl SlitGeometry {
    pub fn new(slit_separation: f64, screen_distance: f64, wavenumber: f64) -> Result<Self, ScreenError> {
        for (name, value) in [
            ("slit separation", slit_separation),
            ("screen distance", screen_distance),
            ("wavenumber", wavenumber),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ScreenError::InvalidGeometry { name, value });
            }
        }
        Ok(Self { slit_separation, screen_distance, wavenumber })
    }

    pub fn slit_separation(&self) -> f64 {
        self.slit_separation
    }

    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn wavelength(&self) -> f64 {
        std::f64::consts::TAU / self.wavenumber
    }

    /// Far-field fringe spacing `λL/d`.
    pub fn fringe_period(&self) -> f64 {
        self.wavelength() * self.screen_distance / self.slit_separation
    }

    pub fn point(&self, y: f64) -> ScreenPoint {
        let half = 0.5 * self.slit_separation;
        let l2 = self.screen_distance * self.screen_distance;
        let r0 = (l2 + (y - half).powi(2)).sqrt();
        let r1 = (l2 + (y + half).powi(2)).sqrt();
        // r0² − r1² = −2yd, which avoids cancellation in r0 − r1.
        let path_difference = -2.0 * y * self.slit_separation / (r0 + r1);
        ScreenPoint { y, r0, r1, path_difference }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreenPoint {
    pub y: f64,
    pub r0: f64,
    pub r1: f64,
    /// `r0 − r1`
    pub path_difference: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternSample {
    pub y: f64,
    pub rho_total: f64,
    pub rho_q0: f64,
    pub rho_q1: f64,
}

/// Screen density at transverse position `y`, in the single-slit plus
/// interference decomposition
/// `ρ(P) = ρ₀ + ρ₁ + 2√(ρ₀ρ₁)·Re[μ e^{ik(r₀−r₁)}]`.
pub fn point_density(rho: &DensityMatrix, geom: &SlitGeometry, y: f64) -> PatternSample {
    let pt = geom.point(y);
    let rho_q0 = rho.slit_population(Slit::Q0) / (pt.r0 * pt.r0);
    let rho_q1 = rho.slit_population(Slit::Q1) / (pt.r1 * pt.r1);
    let interference = match metrics::degree_of_coherence(rho) {
        Ok(mu) => {
            let phase = Complex::from_polar(1.0, geom.wavenumber() * pt.path_difference);
            2.0 * (rho_q0 * rho_q1).sqrt() * (mu.value() * phase).re
        }
        // A closed slit carries no cross term.
        Err(MetricError::SlitUnpopulated(_)) => 0.0,
        Err(MetricError::NegativeRadicand { .. }) => unreachable!("coherence has no radicand"),
    };
    // |μ| ≤ 1 bounds the total below by (√ρ₀ − √ρ₁)² ≥ 0; clip rounding.
    let rho_total = (rho_q0 + rho_q1 + interference).max(0.0);
    PatternSample { y, rho_total, rho_q0, rho_q1 }
}

/// Screen density evaluated directly as `⟨H,P|ρ|H,P⟩ + ⟨V,P|ρ|V,P⟩` from the
/// spherical-wave amplitudes, with no reference to μ.
pub fn direct_density(rho: &DensityMatrix, geom: &SlitGeometry, y: f64) -> f64 {
    let pt = geom.point(y);
    let k = geom.wavenumber();
    // A phase common to both amplitudes drops out of every term. Referencing
    // the phases to (r0 + r1)/2 keeps k·r (often ~10⁶ rad) out of the
    // arguments, where it would cost ~1e-10 relative accuracy.
    let half = 0.5 * k * pt.path_difference;
    let amp0 = Complex::from_polar(1.0 / pt.r0, half);
    let amp1 = Complex::from_polar(1.0 / pt.r1, -half);
    [(Basis::H0, Basis::H1), (Basis::V0, Basis::V1)]
        .iter()
        .map(|&(at0, at1)| {
            // ⟨pol,P|m⟩ for the two path states carrying this polarization.
            let bra = [(at0, amp0), (at1, amp1)];
            let mut acc = Complex::new(0.0, 0.0);
            for &(m, um) in &bra {
                for &(n, un) in &bra {
                    acc += um * rho[(m, n)] * un.conj();
                }
            }
            acc.re
        })
        .sum()
}

/// Uniform sweep over `[y_min, y_max]`, endpoints included.
pub fn pattern(
    rho: &DensityMatrix,
    geom: &SlitGeometry,
    y_min: f64,
    y_max: f64,
    n_points: usize,
) -> Result<Vec<PatternSample>, ScreenError> {
    if n_points < 2 || !(y_min < y_max) || !y_min.is_finite() || !y_max.is_finite() {
        return Err(ScreenError::InvalidRange { y_min, y_max, n_points });
    }
    let step = (y_max - y_min) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            let y = if i == n_points - 1 { y_max } else { y_min + step * i as f64 };
            point_density(rho, geom, y)
        })
        .collect())
}

/// `rho_total` divided by its maximum over the sweep.
pub fn normalized_density(samples: &[PatternSample]) -> Vec<f64> {
    let peak = samples.iter().map(|s| s.rho_total).fold(0.0, f64::max);
    samples
        .iter()
        .map(|s| if peak > 0.0 { s.rho_total / peak } else { 0.0 })
        .collect()
}

/// Fringe visibility `(max − min)/(max + min)` of the pattern after dividing
/// out the single-slit envelope `rho_q0 + rho_q1`.
///
/// The whole slice is the window, so callers pass the central region.
/// Equals `2√(ρ₀ρ₁)|μ|/(ρ₀+ρ₁)` in the small-angle limit.
pub fn extract_visibility(samples: &[PatternSample]) -> Result<f64, ScreenError> {
    let normalized = samples
        .iter()
        .map(|s| {
            let envelope = s.rho_q0 + s.rho_q1;
            if envelope > 0.0 {
                Ok(s.rho_total / envelope)
            } else {
                Err(ScreenError::EmptyEnvelope)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if normalized.len() < 2 {
        return Err(ScreenError::InsufficientFringes { crossings: 0 });
    }
    let max = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = normalized.iter().copied().fold(f64::INFINITY, f64::min);
    let visibility = (max - min) / (max + min);
    if visibility < FLAT_VISIBILITY {
        return Ok(visibility);
    }
    let mid = 0.5 * (max + min);
    let crossings = normalized
        .windows(2)
        .filter(|w| (w[0] - mid).signum() != (w[1] - mid).signum())
        .count();
    if crossings < MIN_CROSSINGS {
        return Err(ScreenError::InsufficientFringes { crossings });
    }
    Ok(visibility)
}

/// Inverts the visibility relation using the mean single-slit densities
/// of the same samples: `|μ| = V·(ρ₀+ρ₁)/(2√(ρ₀ρ₁))`.
pub fn coherence_from_visibility(visibility: f64, samples: &[PatternSample]) -> Option<f64> {
    let n = samples.len() as f64;
    let q0 = samples.iter().map(|s| s.rho_q0).sum::<f64>() / n;
    let q1 = samples.iter().map(|s| s.rho_q1).sum::<f64>() / n;
    if q0 > 0.0 && q1 > 0.0 {
        Some(visibility * (q0 + q1) / (2.0 * (q0 * q1).sqrt()))
    } else {
        None
    }
}
