//! Kraus-channel decoherence over the 4-dimensional polarization ⊗ path
//! space.
//!
//! Two environments are built in. A path-dephasing medium kicks the photon
//! with random phases that depend only on which slit it came through; a
//! birefringent medium's kicks also depend on polarization. Both only scale
//! off-diagonal elements, so continuous-time evolution is a closed-form
//! element mask with factor `e^{−Γt}`.

use std::fmt;

use thiserror::Error;

use crate::density::{Basis, Complex, DensityMatrix, Matrix};
use crate::metrics::{self, MetricError};
use crate::Slit;

/// Per-element tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("interaction probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("channel has no Kraus operators")]
    Empty,
    #[error("Kraus operators are not complete: max |ΣK†K − I| = {residual:.3e}")]
    Incomplete { residual: f64 },
    #[error("decay rate and time must be finite and non-negative (gamma = {gamma}, t = {t})")]
    InvalidTime { gamma: f64, t: f64 },
    #[error("time series needs t_max ≥ 0 and at least 2 samples (got t_max = {t_max}, {n_samples} samples)")]
    InvalidSeries { t_max: f64, n_samples: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A trace-preserving completely positive map `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Matrix>,
    label: String,
}

impl KrausChannel {
    pub fn new(label: impl Into<String>, operators: Vec<Matrix>) -> Result<Self, ChannelError> {
        if operators.is_empty() {
            return Err(ChannelError::Empty);
        }
        if operators.iter().flat_map(|k| k.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ChannelError::Incomplete { residual: f64::NAN });
        }
        let residual = completeness_residual(&operators);
        if !(residual <= COMPLETENESS_TOL) {
            return Err(ChannelError::Incomplete { residual });
        }
        Ok(Self { operators, label: label.into() })
    }

    pub fn identity() -> Self {
        Self { operators: vec![Matrix::identity()], label: "identity".into() }
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = rho.matrix();
        let out = self.operators.iter().fold(Matrix::zeros(), |acc, k| acc + k * m * k.adjoint());
        DensityMatrix::from_trusted(out)
    }
}

/// `max |Σ K†K − I|` over all elements.
pub fn completeness_residual(operators: &[Matrix]) -> f64 {
    let sum = operators.iter().fold(Matrix::zeros(), |acc, k| acc + k.adjoint() * k);
    (sum - Matrix::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `ρ' = Σ K ρ K†`
pub fn apply(channel: &KrausChannel, rho: &DensityMatrix) -> DensityMatrix {
    channel.apply(rho)
}

fn check_probability(p: f64) -> Result<(), ChannelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ChannelError::ProbabilityOutOfRange(p))
    }
}

fn scaled_projector(scale: f64, basis: &[Basis]) -> Matrix {
    basis.iter().fold(Matrix::zeros(), |acc, b| acc + b.projector()) * Complex::new(scale, 0.0)
}

fn dephasing_channel(label: &str, p: f64, groups: &[&[Basis]]) -> Result<KrausChannel, ChannelError> {
    check_probability(p)?;
    let mut operators = vec![Matrix::identity() * Complex::new((1.0 - p).sqrt(), 0.0)];
    if p > 0.0 {
        let s = p.sqrt();
        operators.extend(groups.iter().map(|g| scaled_projector(s, g)));
    }
    KrausChannel::new(label, operators)
}

/// Slit-dependent random phase kicks with interaction probability `p`:
/// `K₀ = √(1−p)·I`, `K₁ = √p·(|H,0⟩⟨H,0| + |V,0⟩⟨V,0|)`,
/// `K₂ = √p·(|H,1⟩⟨H,1| + |V,1⟩⟨V,1|)`. At `p = 0` only `K₀` is kept.
pub fn path_dephasing(p: f64) -> Result<KrausChannel, ChannelError> {
    dephasing_channel(
        "path-dephasing",
        p,
        &[&[Basis::H0, Basis::V0], &[Basis::H1, Basis::V1]],
    )
}

/// Slit- and polarization-dependent phase kicks: `K₀ = √(1−p)·I` and `√p`
/// times each of the four basis projectors.
pub fn birefringent_dephasing(p: f64) -> Result<KrausChannel, ChannelError> {
    dephasing_channel(
        "birefringent-dephasing",
        p,
        &[&[Basis::H0], &[Basis::H1], &[Basis::V0], &[Basis::V1]],
    )
}

/// Applies `family(p)` to `rho0`, `n` times in succession.
pub fn evolve_discrete<F>(family: F, rho0: &DensityMatrix, p: f64, n: usize) -> Result<DensityMatrix, ChannelError>
where
    F: Fn(f64) -> Result<KrausChannel, ChannelError>,
{
    let channel = family(p)?;
    Ok((0..n).fold(*rho0, |rho, _| channel.apply(&rho)))
}

/// The two built-in environments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PathDephasing,
    Birefringent,
}

impl ChannelKind {
    pub fn channel(self, p: f64) -> Result<KrausChannel, ChannelError> {
        match self {
            ChannelKind::PathDephasing => path_dephasing(p),
            ChannelKind::Birefringent => birefringent_dephasing(p),
        }
    }

    /// Whether element `(row, col)` decays under this environment.
    pub fn decays(self, row: Basis, col: Basis) -> bool {
        match self {
            ChannelKind::PathDephasing => row.slit() != col.slit(),
            ChannelKind::Birefringent => row != col,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelKind::PathDephasing => f.write_str("path-dephasing"),
            ChannelKind::Birefringent => f.write_str("birefringent-dephasing"),
        }
    }
}

/// Continuous-time limit: every decaying element of `rho0` is multiplied by
/// `e^{−Γt}`, the rest are untouched.
pub fn evolve_continuous(
    kind: ChannelKind,
    rho0: &DensityMatrix,
    gamma: f64,
    t: f64,
) -> Result<DensityMatrix, ChannelError> {
    if !(gamma.is_finite() && t.is_finite() && gamma >= 0.0 && t >= 0.0) {
        return Err(ChannelError::InvalidTime { gamma, t });
    }
    let factor = (-gamma * t).exp();
    let m = rho0.matrix();
    let out = Matrix::from_fn(|i, j| {
        if kind.decays(Basis::ALL[i], Basis::ALL[j]) {
            m[(i, j)] * factor
        } else {
            m[(i, j)]
        }
    });
    Ok(DensityMatrix::from_trusted(out))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecaySample {
    pub t: f64,
    pub abs_mu: f64,
    pub p0: f64,
    pub p1: f64,
}

/// Coherence and polarization at `n_samples` uniform times in `[0, t_max]`.
pub fn decay_report(
    rho0: &DensityMatrix,
    kind: ChannelKind,
    gamma: f64,
    t_max: f64,
    n_samples: usize,
) -> Result<Vec<DecaySample>, ChannelError> {
    if n_samples < 2 || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(ChannelError::InvalidSeries { t_max, n_samples });
    }
    let dt = t_max / (n_samples - 1) as f64;
    (0..n_samples)
        .map(|i| {
            let t = if i == n_samples - 1 { t_max } else { dt * i as f64 };
            let rho = evolve_continuous(kind, rho0, gamma, t)?;
            sample_metrics(t, &rho)
        })
        .collect()
}

pub(crate) fn sample_metrics(t: f64, rho: &DensityMatrix) -> Result<DecaySample, ChannelError> {
    Ok(DecaySample {
        t,
        abs_mu: metrics::degree_of_coherence(rho)?.modulus(),
        p0: metrics::degree_of_polarization(rho, Slit::Q0)?.p,
        p1: metrics::degree_of_polarization(rho, Slit::Q1)?.p,
    })
}

/// Repeated application of an arbitrary channel; sample `i` is the state
/// after `i` applications and its `t` is the step index.
pub fn step_report(
    channel: &KrausChannel,
    rho0: &DensityMatrix,
    n_samples: usize,
) -> Result<Vec<DecaySample>, ChannelError> {
    if n_samples < 2 {
        return Err(ChannelError::InvalidSeries { t_max: 0.0, n_samples });
    }
    let mut rho = *rho0;
    let mut out = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        if i > 0 {
            rho = channel.apply(&rho);
        }
        out.push(sample_metrics(i as f64, &rho)?);
    }
    Ok(out)
}
