//! Free-space depolarization of a two-subensemble mixture.
//!
//! Two orthogonally polarized groups, each equally split between the slits,
//! spread as Gaussian beams with different Rayleigh lengths. On axis the
//! relative intensity of group `j` falls as `[1 + (z/z_j)²]⁻¹`, which shifts
//! the mixture weights and therefore the degree of polarization.

use thiserror::Error;

use crate::density::{Complex, DensityMatrix, Matrix, NORM_TOL};
use crate::metrics;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("propagation distance must be finite and non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("initial weights ({w1}, {w2}) must be non-negative and sum to 1")]
    Weights { w1: f64, w2: f64 },
    #[error("curve needs z_max > 0 and at least 2 steps (got z_max = {z_max}, {n_steps} steps)")]
    InvalidRange { z_max: f64, n_steps: usize },
}

/// Beam width `σ₀√(1 + (z/z_R)²)`.
pub fn width(sigma0: f64, z: f64, z_rayleigh: f64) -> Result<f64, PropagationError> {
    positive("waist width", sigma0)?;
    positive("Rayleigh length", z_rayleigh)?;
    non_negative(z)?;
    Ok(sigma0 * (1.0 + (z / z_rayleigh).powi(2)).sqrt())
}

/// The two subensembles: group 1 is `(|H,0⟩+|H,1⟩)/√2`, group 2 is
/// `(|V,0⟩+|V,1⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianBeamPair {
    sigma1_0: f64,
    sigma2_0: f64,
    z1: f64,
    z2: f64,
    w1_0: f64,
    w2_0: f64,
}

impl GaussianBeamPair {
    pub fn new(
        sigma1_0: f64,
        sigma2_0: f64,
        z1: f64,
        z2: f64,
        w1_0: f64,
        w2_0: f64,
    ) -> Result<Self, PropagationError> {
        positive("sigma1_0", sigma1_0)?;
        positive("sigma2_0", sigma2_0)?;
        positive("z1", z1)?;
        positive("z2", z2)?;
        let weights_ok = w1_0.is_finite()
            && w2_0.is_finite()
            && w1_0 >= 0.0
            && w2_0 >= 0.0
            && (w1_0 + w2_0 - 1.0).abs() <= NORM_TOL;
        if !weights_ok {
            return Err(PropagationError::Weights { w1: w1_0, w2: w2_0 });
        }
        Ok(Self { sigma1_0, sigma2_0, z1, z2, w1_0, w2_0 })
    }

    /// Equal initial populations.
    pub fn balanced(sigma1_0: f64, sigma2_0: f64, z1: f64, z2: f64) -> Result<Self, PropagationError> {
        Self::new(sigma1_0, sigma2_0, z1, z2, 0.5, 0.5)
    }

    pub fn rayleigh_lengths(&self) -> (f64, f64) {
        (self.z1, self.z2)
    }

    pub fn initial_weights(&self) -> (f64, f64) {
        (self.w1_0, self.w2_0)
    }

    pub fn widths_at(&self, z: f64) -> Result<(f64, f64), PropagationError> {
        Ok((width(self.sigma1_0, z, self.z1)?, width(self.sigma2_0, z, self.z2)?))
    }

    /// `p(∞) = |w₁₀z₁² − w₂₀z₂²| / (w₁₀z₁² + w₂₀z₂²)`
    pub fn asymptotic_polarization(&self) -> f64 {
        let a = self.w1_0 * self.z1 * self.z1;
        let b = self.w2_0 * self.z2 * self.z2;
        if a + b == 0.0 {
            0.0
        } else {
            (a - b).abs() / (a + b)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationSample {
    pub z: f64,
    pub w1: f64,
    pub w2: f64,
    pub p: f64,
    pub mu: f64,
}

/// On-axis mixture weights at distance `z`, normalized to sum to one.
pub fn weights(pair: &GaussianBeamPair, z: f64) -> Result<(f64, f64), PropagationError> {
    non_negative(z)?;
    let falloff = |zr: f64| 1.0 / (1.0 + (z / zr).powi(2));
    let a = pair.w1_0 * falloff(pair.z1);
    let b = pair.w2_0 * falloff(pair.z2);
    let total = a + b;
    Ok((a / total, b / total))
}

/// Block density matrix `½·diag(w₁·J, w₂·J)` with `J` the 2×2 all-ones matrix.
pub fn density_matrix_at(pair: &GaussianBeamPair, z: f64) -> Result<DensityMatrix, PropagationError> {
    let (w1, w2) = weights(pair, z)?;
    Ok(block_matrix(w1, w2))
}

pub(crate) fn block_matrix(w1: f64, w2: f64) -> DensityMatrix {
    let a = Complex::new(0.5 * w1, 0.0);
    let b = Complex::new(0.5 * w2, 0.0);
    let o = Complex::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix::new(
        a, a, o, o,
        a, a, o, o,
        o, o, b, b,
        o, o, b, b,
    );
    DensityMatrix::from_trusted(m)
}

/// Samples `z ∈ [0, z_max]` uniformly, `n_steps` points inclusive.
pub fn polarization_curve(
    pair: &GaussianBeamPair,
    z_max: f64,
    n_steps: usize,
) -> Result<Vec<PropagationSample>, PropagationError> {
    if n_steps < 2 || !(z_max > 0.0) || !z_max.is_finite() {
        return Err(PropagationError::InvalidRange { z_max, n_steps });
    }
    let dz = z_max / (n_steps - 1) as f64;
    (0..n_steps)
        .map(|i| {
            let z = if i == n_steps - 1 { z_max } else { dz * i as f64 };
            sample_at(pair, z)
        })
        .collect()
}

pub fn sample_at(pair: &GaussianBeamPair, z: f64) -> Result<PropagationSample, PropagationError> {
    let (w1, w2) = weights(pair, z)?;
    let rho = block_matrix(w1, w2);
    // Both slits always hold half of each group, so the metrics are defined.
    let p = metrics::degree_of_polarization(&rho, crate::Slit::Q0)
        .expect("slit Q0 is populated")
        .p;
    let mu = metrics::degree_of_coherence(&rho).expect("both slits are populated").modulus();
    Ok(PropagationSample { z, w1, w2, p, mu })
}

fn positive(name: &'static str, value: f64) -> Result<(), PropagationError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PropagationError::NonPositive { name, value })
    }
}

fn non_negative(z: f64) -> Result<(), PropagationError> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(PropagationError::NegativeDistance(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Slit;

    fn pair(z1: f64, z2: f64) -> GaussianBeamPair {
        GaussianBeamPair::balanced(1e-3, 2e-3, z1, z2).unwrap()
    }

    #[test]
    fn width_values() {
        assert_eq!(width(2.0, 0.0, 5.0).unwrap(), 2.0);
        assert!((width(2.0, 5.0, 5.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((width(2.0, 15.0, 5.0).unwrap() - 2.0 * 10f64.sqrt()).abs() < 1e-14);
        assert!(width(0.0, 1.0, 1.0).is_err());
        assert!(width(1.0, 1.0, -1.0).is_err());
        assert!(width(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn width_is_monotone() {
        let mut last = 0.0;
        for i in 0..100 {
            let w = width(1.0, 0.37 * i as f64, 3.0).unwrap();
            assert!(w >= last);
            last = w;
        }
    }

    #[test]
    fn weights_examples() {
        let p = pair(1.0, 2.0);
        assert_eq!(weights(&p, 0.0).unwrap(), (0.5, 0.5));
        let (w1, w2) = weights(&p, 1.0).unwrap();
        assert!((w1 - 5.0 / 13.0).abs() < 1e-15 && (w2 - 8.0 / 13.0).abs() < 1e-15);
        let (w1, w2) = weights(&p, 1e7).unwrap();
        assert!((w1 - 0.2).abs() < 1e-12 && (w2 - 0.8).abs() < 1e-12);
        assert!(weights(&p, -1.0).is_err());
    }

    #[test]
    fn pair_validation() {
        assert!(GaussianBeamPair::new(1.0, 1.0, 1.0, 1.0, 0.7, 0.2).is_err());
        assert!(GaussianBeamPair::new(1.0, 1.0, 1.0, 1.0, 1.2, -0.2).is_err());
        assert!(GaussianBeamPair::new(1.0, 1.0, 0.0, 1.0, 0.5, 0.5).is_err());
        assert!(GaussianBeamPair::new(1.0, 1.0, 1.0, 1.0, 0.3, 0.7).is_ok());
    }

    #[test]
    fn unequal_initial_weights() {
        let p = GaussianBeamPair::new(1.0, 1.0, 1.0, 1.0, 0.3, 0.7).unwrap();
        let (w1, w2) = weights(&p, 4.0).unwrap();
        assert!((w1 - 0.3).abs() < 1e-15 && (w2 - 0.7).abs() < 1e-15);
        assert!((sample_at(&p, 9.0).unwrap().p - 0.4).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_metrics() {
        let p = pair(1.0, 2.0);
        let rho0 = density_matrix_at(&p, 0.0).unwrap();
        assert!((metrics::degree_of_coherence(&rho0).unwrap().modulus() - 1.0).abs() < 1e-12);
        for slit in [Slit::Q0, Slit::Q1] {
            assert!(metrics::degree_of_polarization(&rho0, slit).unwrap().p.abs() < 1e-12);
        }
        let rho1 = density_matrix_at(&p, 1.0).unwrap();
        for slit in [Slit::Q0, Slit::Q1] {
            let pol = metrics::degree_of_polarization(&rho1, slit).unwrap().p;
            assert!((pol - 3.0 / 13.0).abs() < 1e-12);
        }
        for z in [0.0, 0.5, 3.0, 40.0, 1e4] {
            let rho = density_matrix_at(&p, z).unwrap();
            assert!(DensityMatrix::validate(*rho.matrix()).is_ok());
            assert!((metrics::degree_of_coherence(&rho).unwrap().modulus() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_shape() {
        let curve = polarization_curve(&pair(1.0, 2.0), 100.0, 1001).unwrap();
        assert_eq!(curve.len(), 1001);
        assert_eq!(curve[0].p, 0.0);
        assert_eq!(curve.last().unwrap().z, 100.0);
        assert!((curve.last().unwrap().p - 0.6).abs() < 1e-3);
        assert!(curve.windows(2).all(|w| w[1].p >= w[0].p));

        let flat = polarization_curve(&pair(2.0, 2.0), 50.0, 11).unwrap();
        assert!(flat.iter().all(|s| s.p.abs() < 1e-12));
        assert!(polarization_curve(&pair(1.0, 2.0), 0.0, 10).is_err());
        assert!(polarization_curve(&pair(1.0, 2.0), 1.0, 1).is_err());
    }

    #[test]
    fn asymptote() {
        assert!((pair(1.0, 2.0).asymptotic_polarization() - 0.6).abs() < 1e-15);
        assert!((pair(1.0, 3.0).asymptotic_polarization() - 0.8).abs() < 1e-15);
    }
}
