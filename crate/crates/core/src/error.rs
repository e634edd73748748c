use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed spec: {0}")]
    MalformedSpec(String),

    #[error("orbit escaped: Boole map hit the singular point at step {step} (x = {x:e})")]
    OrbitEscape { step: usize, x: f64 },

    #[error("unknown cell {index} in part {part}")]
    UnknownCell { part: usize, index: i64 },

    #[error("observable {0} has no finite L1 norm on an infinite-measure part")]
    NonIntegrableObservable(String),

    #[error("observable {observable} cannot be evaluated on a {part} part")]
    IncompatibleObservable { observable: String, part: String },

    #[error("observable is not in R_mu: {0}")]
    NotInRmu(String),

    #[error("quadrature too coarse: resolution {resolution} needs at least {required}")]
    QuadratureTooCoarse { resolution: usize, required: usize },

    #[error("system has no Kronecker model for part {0}")]
    NoKroneckerModel(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation needs a finite permutation system")]
    NotFiniteSystem,

    #[error("operation needs finite total measure")]
    InfiniteMeasure,

    #[error("need at least two checkpoints at or beyond {start}, found {found}")]
    InsufficientCheckpoints { start: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
