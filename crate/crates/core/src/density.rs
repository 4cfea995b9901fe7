//! State space of a photon that passed a two-slit mask: polarization (H/V)
//! tensored with path (slit Q₀ / slit Q₁).
//!
//! Every index in the crate derives from [`Basis`], ordered
//! `|H,0⟩, |H,1⟩, |V,0⟩, |V,1⟩`.

use std::fmt;
use std::ops::Index;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use thiserror::Error;

/// Normalization tolerance for pure states and mixture weights.
pub const NORM_TOL: f64 = 1e-9;
/// Absolute per-element tolerance for `ρ_mn = ρ*_nm`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of `tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue a valid density matrix may have.
pub const PSD_FLOOR: f64 = -1e-10;

pub type Complex = Complex64;
pub type Matrix = Matrix4<Complex64>;

/// Basis vectors of the 4-dimensional polarization ⊗ path space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    H0,
    H1,
    V0,
    V1,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::H0, Basis::H1, Basis::V0, Basis::V1];

    pub const fn index(self) -> usize {
        match self {
            Basis::H0 => 0,
            Basis::H1 => 1,
            Basis::V0 => 2,
            Basis::V1 => 3,
        }
    }

    pub const fn slit(self) -> Slit {
        match self {
            Basis::H0 | Basis::V0 => Slit::Q0,
            Basis::H1 | Basis::V1 => Slit::Q1,
        }
    }

    /// `|b⟩⟨b|`
    pub fn projector(self) -> Matrix {
        let mut m = Matrix::zeros();
        m[(self.index(), self.index())] = Complex::new(1.0, 0.0);
        m
    }
}

/// One of the two openings in the mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slit {
    Q0,
    Q1,
}

impl Slit {
    /// The `(H, V)` basis pair living at this slit.
    pub const fn polarization_pair(self) -> (Basis, Basis) {
        match self {
            Slit::Q0 => (Basis::H0, Basis::V0),
            Slit::Q1 => (Basis::H1, Basis::V1),
        }
    }

    pub const fn other(self) -> Slit {
        match self {
            Slit::Q0 => Slit::Q1,
            Slit::Q1 => Slit::Q0,
        }
    }
}

impl fmt::Display for Slit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slit::Q0 => f.write_str("Q0"),
            Slit::Q1 => f.write_str("Q1"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("amplitude or weight is not finite")]
    NonFinite,
    #[error("pure state is not normalized: |a|²+|b|²+|c|²+|d|² = {norm}")]
    NotNormalized { norm: f64 },
    #[error("mixture has no components")]
    EmptyMixture,
    #[error("mixture weight {weight} at component {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("mixture weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("invalid density matrix: {0}")]
    Invalid(ValidationReport),
}

/// Coefficients of `|H,0⟩, |H,1⟩, |V,0⟩, |V,1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    amps: [Complex; 4],
}

impl PureState {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self, StateError> {
        Self::from_amplitudes([a, b, c, d])
    }

    pub fn from_amplitudes(amps: [Complex; 4]) -> Result<Self, StateError> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [Complex; 4]) -> Result<Self, StateError> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(StateError::NotNormalized { norm: 0.0 });
        }
        Self::from_amplitudes(amps.map(|z| z / norm))
    }

    pub fn basis(b: Basis) -> Self {
        let mut amps = [Complex::new(0.0, 0.0); 4];
        amps[b.index()] = Complex::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitude(&self, b: Basis) -> Complex {
        self.amps[b.index()]
    }

    pub fn amplitudes(&self) -> [Complex; 4] {
        self.amps
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex::from_polar(1.0, theta);
        Self { amps: self.amps.map(|z| z * phase) }
    }

    fn ket(&self) -> Vector4<Complex> {
        Vector4::from(self.amps)
    }
}

/// Convex combination of pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureSpec {
    components: Vec<(f64, PureState)>,
}

impl MixtureSpec {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self, StateError> {
        if components.is_empty() {
            return Err(StateError::EmptyMixture);
        }
        for (index, &(weight, _)) in components.iter().enumerate() {
            if !weight.is_finite() {
                return Err(StateError::NonFinite);
            }
            if weight < 0.0 {
                return Err(StateError::NegativeWeight { index, weight });
            }
        }
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(StateError::WeightSum { sum });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }
}

/// Every invariant a raw matrix failed. Fields are `None` when that check
/// passed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub non_finite: bool,
    /// Largest `|ρ_mn − ρ*_nm|`.
    pub hermiticity_residual: Option<f64>,
    /// `tr ρ − 1`, complex part included via its modulus.
    pub trace_deviation: Option<f64>,
    /// Most negative eigenvalue of the Hermitian part.
    pub min_eigenvalue: Option<f64>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        !self.non_finite
            && self.hermiticity_residual.is_none()
            && self.trace_deviation.is_none()
            && self.min_eigenvalue.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.non_finite {
            parts.push("non-finite element".to_string());
        }
        if let Some(r) = self.hermiticity_residual {
            parts.push(format!("not Hermitian (max residual {r:.3e})"));
        }
        if let Some(d) = self.trace_deviation {
            parts.push(format!("trace deviates from 1 by {d:.3e}"));
        }
        if let Some(l) = self.min_eigenvalue {
            parts.push(format!("not positive semidefinite (eigenvalue {l:.3e})"));
        }
        if parts.is_empty() {
            f.write_str("no violations")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

impl std::error::Error for ValidationReport {}

/// Validated 4×4 density matrix: Hermitian, unit trace, positive
/// semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    m: Matrix,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(state: &PureState) -> Self {
        let ket = state.ket();
        Self { m: ket * ket.adjoint() }
    }

    pub fn from_mixture(spec: &MixtureSpec) -> Result<Self, StateError> {
        let m = spec
            .components()
            .iter()
            .fold(Matrix::zeros(), |acc, (w, psi)| acc + Self::from_pure(psi).m * Complex::new(*w, 0.0));
        Self::validate(m).map_err(StateError::Invalid)
    }

    /// Checks every invariant and reports all violations together. The input
    /// is never repaired.
    pub fn validate(m: Matrix) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            report.non_finite = true;
            return Err(report);
        }
        let residual = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > HERMITIAN_TOL {
            report.hermiticity_residual = Some(residual);
        }
        let trace_dev = (m.trace() - Complex::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            report.trace_deviation = Some(trace_dev);
        }
        let min_eig = hermitian_eigenvalues(&hermitian_part(&m)).min();
        if min_eig < PSD_FLOOR {
            report.min_eigenvalue = Some(min_eig);
        }
        if report.is_clean() {
            Ok(Self { m })
        } else {
            Err(report)
        }
    }

    /// `diag(1/4, 1/4, 1/4, 1/4)`
    pub fn maximally_mixed() -> Self {
        Self { m: Matrix::identity() * Complex::new(0.25, 0.0) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn get(&self, row: Basis, col: Basis) -> Complex {
        self.m[(row.index(), col.index())]
    }

    /// Real diagonal entry `ρ_bb`.
    pub fn population(&self, b: Basis) -> f64 {
        self.get(b, b).re
    }

    /// `ρ₁₁+ρ₃₃` for Q₀, `ρ₂₂+ρ₄₄` for Q₁.
    pub fn slit_population(&self, slit: Slit) -> f64 {
        let (h, v) = slit.polarization_pair();
        self.population(h) + self.population(v)
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: [f64; 4] = hermitian_eigenvalues(&hermitian_part(&self.m)).into();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Simultaneous relabeling Q₀ ↔ Q₁ (index swap 1↔2, 3↔4).
    pub fn swap_slits(&self) -> Self {
        let perm = [1, 0, 3, 2];
        Self { m: Matrix::from_fn(|i, j| self.m[(perm[i], perm[j])]) }
    }

    /// Wraps a matrix already known to be a density matrix, skipping the
    /// eigenvalue check. Callers are maps proven to preserve validity.
    pub(crate) fn from_trusted(m: Matrix) -> Self {
        debug_assert!(Self::validate(m).is_ok(), "{}", Self::validate(m).unwrap_err());
        Self { m }
    }
}

impl Index<(Basis, Basis)> for DensityMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (Basis, Basis)) -> &Complex {
        &self.m[(row.index(), col.index())]
    }
}

fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

fn hermitian_eigenvalues(m: &Matrix) -> Vector4<f64> {
    SymmetricEigen::new(*m).eigenvalues
}
