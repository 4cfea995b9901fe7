//! JSON state and channel files.
//!
//! Complex numbers are two-element arrays `[re, im]`. A state file holds
//! exactly one of:
//!
//! ```json
//! {"pure": {"a": [re, im], "b": [re, im], "c": [re, im], "d": [re, im]}}
//! {"mixture": [{"weight": w, "pure": {...}}, ...]}
//! {"matrix": [[[re, im], ...4], ...4]}
//! ```
//!
//! Matrices are row-major in basis order `|H,0⟩, |H,1⟩, |V,0⟩, |V,1⟩`.
//! Omitted pure-state amplitudes are zero. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{ChannelError, ChannelKind, KrausChannel};
use crate::density::{Complex, DensityMatrix, Matrix, MixtureSpec, PureState, StateError};

type ComplexPair = [f64; 2];
type MatrixRows = [[ComplexPair; 4]; 4];

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure(PureSpec),
    Mixture(Vec<MixtureEntry>),
    Matrix(MatrixRows),
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PureSpec {
    #[serde(default)]
    pub a: ComplexPair,
    #[serde(default)]
    pub b: ComplexPair,
    #[serde(default)]
    pub c: ComplexPair,
    #[serde(default)]
    pub d: ComplexPair,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureEntry {
    pub weight: f64,
    pub pure: PureSpec,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelSpec {
    PathDephasing {
        #[serde(default)]
        p: Option<f64>,
    },
    BirefringentDephasing {
        #[serde(default)]
        p: Option<f64>,
    },
    Custom {
        kraus: Vec<MatrixRows>,
    },
}

impl ChannelSpec {
    /// Built-in environment, if this is not a custom Kraus set.
    pub fn kind(&self) -> Option<ChannelKind> {
        match self {
            ChannelSpec::PathDephasing { .. } => Some(ChannelKind::PathDephasing),
            ChannelSpec::BirefringentDephasing { .. } => Some(ChannelKind::Birefringent),
            ChannelSpec::Custom { .. } => None,
        }
    }

    /// Builds the Kraus set. Built-in kinds need `p`; a missing `p` is
    /// reported as out of range.
    pub fn to_channel(&self) -> Result<KrausChannel, ChannelError> {
        match self {
            ChannelSpec::PathDephasing { p } | ChannelSpec::BirefringentDephasing { p } => {
                let kind = self.kind().expect("built-in kind");
                kind.channel(p.unwrap_or(f64::NAN))
            }
            ChannelSpec::Custom { kraus } => KrausChannel::new("custom", kraus.iter().map(matrix_from_rows).collect()),
        }
    }
}

fn complex(pair: ComplexPair) -> Complex {
    Complex::new(pair[0], pair[1])
}

fn matrix_from_rows(rows: &MatrixRows) -> Matrix {
    Matrix::from_fn(|i, j| complex(rows[i][j]))
}

fn pure_state(spec: &PureSpec) -> Result<PureState, StateError> {
    PureState::new(complex(spec.a), complex(spec.b), complex(spec.c), complex(spec.d))
}

impl StateFile {
    pub fn to_density_matrix(&self) -> Result<DensityMatrix, StateError> {
        match self {
            StateFile::Pure(spec) => Ok(DensityMatrix::from_pure(&pure_state(spec)?)),
            StateFile::Mixture(entries) => {
                let components = entries
                    .iter()
                    .map(|e| Ok((e.weight, pure_state(&e.pure)?)))
                    .collect::<Result<Vec<_>, StateError>>()?;
                DensityMatrix::from_mixture(&MixtureSpec::new(components)?)
            }
            StateFile::Matrix(rows) => DensityMatrix::validate(matrix_from_rows(rows)).map_err(StateError::Invalid),
        }
    }

    pub fn from_density_matrix(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        StateFile::Matrix(std::array::from_fn(|i| std::array::from_fn(|j| [m[(i, j)].re, m[(i, j)].im])))
    }
}

/// Deserializes with the offending key path and line/column in the error.
fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        InputError::Parse { path, source: err.into_inner() }
    })
}

pub fn parse_state(text: &str) -> Result<DensityMatrix, InputError> {
    Ok(parse::<StateFile>(text)?.to_density_matrix()?)
}

pub fn parse_channel(text: &str) -> Result<ChannelSpec, InputError> {
    let spec: ChannelSpec = parse(text)?;
    // Surface bad Kraus sets at load time.
    if let ChannelSpec::Custom { .. } = spec {
        spec.to_channel()?;
    }
    Ok(spec)
}

/// `{"matrix": ...}` form of a density matrix.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_density_matrix(rho)).expect("matrix serializes")
}
