//! Joint description of spatial coherence and polarization for an ensemble of
//! photons behind a two-slit mask, built on a 4×4 density matrix over
//! polarization (H/V) ⊗ path (Q₀/Q₁).
//!
//! - [`density`]: state space, pure and mixed states, validity checks
//! - [`metrics`]: degree of coherence μ, Stokes parameters, degrees of polarization
//! - [`screen`]: double-slit screen density and fringe visibility
//! - [`propagation`]: free-space depolarization of two diffracting subensembles
//! - [`channels`]: Kraus-channel decoherence, discrete and continuous
//! - [`io`], [`cli`]: JSON inputs and the `cohpol` command line

pub mod channels;
pub mod cli;
pub mod density;
pub mod io;
pub mod metrics;
pub mod propagation;
pub mod screen;

pub use channels::{ChannelKind, KrausChannel};
pub use density::{Basis, Complex, DensityMatrix, Matrix, MixtureSpec, PureState, Slit};
pub use metrics::{CoherenceDegree, PolarizationDegree, StokesVector};
pub use propagation::GaussianBeamPair;
pub use screen::{PatternSample, SlitGeometry};
