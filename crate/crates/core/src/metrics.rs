//! Degree of coherence, slit-conditioned Stokes parameters and degrees of
//! polarization of a [`DensityMatrix`].

use thiserror::Error;

use crate::density::{Basis, Complex, DensityMatrix, Slit};

/// A slit whose population is at or below this is treated as closed.
pub const POPULATION_FLOOR: f64 = 1e-12;
/// Radicands in `[-RADICAND_CLAMP, 0)` are rounding noise and clamp to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    /// μ or p is 0/0 here, not zero.
    #[error("slit {0} unpopulated: quantity undefined")]
    SlitUnpopulated(Slit),
    #[error("degree-of-polarization radicand {value:.3e} at slit {slit} is negative beyond rounding")]
    NegativeRadicand { slit: Slit, value: f64 },
}

/// Complex degree of coherence. The modulus sets fringe contrast; the phase
/// shifts the fringes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceDegree(pub Complex);

impl CoherenceDegree {
    pub fn value(&self) -> Complex {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    pub fn phase(&self) -> f64 {
        self.0.arg()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub slit: Slit,
}

impl StokesVector {
    /// `√(s1²+s2²+s3²)/s0`
    pub fn degree_of_polarization(&self) -> Result<PolarizationDegree, MetricError> {
        if self.s0 <= POPULATION_FLOOR {
            return Err(MetricError::SlitUnpopulated(self.slit));
        }
        let p = (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt() / self.s0;
        Ok(PolarizationDegree { p, slit: self.slit })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationDegree {
    pub p: f64,
    pub slit: Slit,
}

/// `μ = (ρ₁₂+ρ₃₄) / (√(ρ₁₁+ρ₃₃)·√(ρ₂₂+ρ₄₄))`
pub fn degree_of_coherence(rho: &DensityMatrix) -> Result<CoherenceDegree, MetricError> {
    let n0 = rho.slit_population(Slit::Q0);
    let n1 = rho.slit_population(Slit::Q1);
    for (slit, n) in [(Slit::Q0, n0), (Slit::Q1, n1)] {
        if n <= POPULATION_FLOOR {
            return Err(MetricError::SlitUnpopulated(slit));
        }
    }
    let cross = rho[(Basis::H0, Basis::H1)] + rho[(Basis::V0, Basis::V1)];
    Ok(CoherenceDegree(cross / (n0.sqrt() * n1.sqrt())))
}

/// Stokes parameters of the photons leaving `slit`. An all-zero vector is
/// returned for an empty slit.
pub fn stokes(rho: &DensityMatrix, slit: Slit) -> StokesVector {
    let (h, v) = slit.polarization_pair();
    let hh = rho[(h, h)];
    let vv = rho[(v, v)];
    let hv = rho[(h, v)];
    let vh = rho[(v, h)];
    let i = Complex::new(0.0, 1.0);
    StokesVector {
        s0: (hh + vv).re,
        s1: (hh - vv).re,
        s2: (vh + hv).re,
        s3: (i * (hv - vh)).re,
        slit,
    }
}

/// `p = √(1 − 4(ρ_hh ρ_vv − ρ_hv ρ_vh)/(ρ_hh+ρ_vv)²)` over the polarization
/// block of `slit`.
pub fn degree_of_polarization(rho: &DensityMatrix, slit: Slit) -> Result<PolarizationDegree, MetricError> {
    let (h, v) = slit.polarization_pair();
    let hh = rho.population(h);
    let vv = rho.population(v);
    let s0 = hh + vv;
    if s0 <= POPULATION_FLOOR {
        return Err(MetricError::SlitUnpopulated(slit));
    }
    let det = hh * vv - (rho[(h, v)] * rho[(v, h)]).re;
    let p = clamped_sqrt(1.0 - 4.0 * det / (s0 * s0), slit)?;
    Ok(PolarizationDegree { p, slit })
}

pub(crate) fn clamped_sqrt(radicand: f64, slit: Slit) -> Result<f64, MetricError> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(MetricError::NegativeRadicand { slit, value: radicand })
    }
}
