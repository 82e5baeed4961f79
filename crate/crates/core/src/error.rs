use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Attack parameters that violate one of the structural invariants.
    #[error("invalid attack parameters: {0}")]
    InvalidParams(String),

    #[error("variable selectors overlap")]
    OverlappingSelectors,

    #[error("variable selector is empty")]
    EmptySelector,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("block lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("block length must be at least 1")]
    EmptyBlock,

    #[error("no sign change of {0} on the search interval")]
    NoSignChange(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[0, 1]",
        })
    }
}

pub(crate) fn check_overlap(what: &'static str, value: f64) -> Result<f64> {
    if (-1.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[-1, 1]",
        })
    }
}
