use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("duplicate label {label:?} in {alphabet} alphabet")]
    DuplicateLabel {
        alphabet: &'static str,
        label: String,
    },

    #[error("negative mass at {location}")]
    NegativeMass { location: String },

    #[error("not normalized: {location} sums to {sum}")]
    NonNormalized { location: String, sum: String },

    #[error("marginal p_{marginal} has no mass on symbol {label:?} (index {index})")]
    EmptySupportMarginal {
        marginal: &'static str,
        index: usize,
        label: String,
    },

    #[error("invalid rational {input:?}: {reason}")]
    InvalidRational { input: String, reason: &'static str },

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("variable sets overlap on {0:?}")]
    OverlappingVariableSets(String),

    #[error("empty subset")]
    EmptySubset,

    #[error("problem is not securely computable")]
    NotComputable,

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("coloring covers {got} vertices, graph has {expected}")]
    IncompleteColoring { expected: usize, got: usize },

    #[error("coloring is not proper: edge {0}-{1} is monochromatic")]
    ImproperColoring(usize, usize),

    #[error(
        "solver did not converge within {iterations} iterations (last change {last_change:e})"
    )]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("auxiliary symbol {u} has support {support:?}, which is not an independent set")]
    InfeasibleU { u: usize, support: Vec<usize> },

    #[error("auxiliary channel does not reproduce p(z|x,y) at x={x}, y={y}, z={z} (gap {gap:e})")]
    ChannelMismatch {
        x: usize,
        y: usize,
        z: usize,
        gap: f64,
    },

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("pair at coordinate {index} has zero probability")]
    UnsupportedPair { index: usize },

    #[error("no admissible problem found after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn cap_check(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
