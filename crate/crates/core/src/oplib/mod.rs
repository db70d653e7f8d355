//! Exact operator algebra on the rotational subsystem: the generalized Pauli
//! basis of su(6J+7), sparse operators with radical coefficients, exact
//! commutators, and the drift action.

mod drift;
mod operator;
mod pauli;
mod structure;

pub use drift::DriftSpec;
pub use operator::{ad_power, element_matrix, ExactOperator};
pub use pauli::{Block, Kind, PauliElement, StateIndex};
pub use structure::commutator_table_entries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("operator dimensions differ: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("state index {0:?} is outside the J={1} subsystem")]
    StateOutOfRange(StateIndex, u32),
    #[error("flat index {0} is outside dimension {1}")]
    FlatOutOfRange(u32, u32),
    #[error("a Pauli element needs two distinct states")]
    DegeneratePair,
    #[error("subsystem dimension {0} is not of the form 6J+7")]
    BadDimension(u32),
    #[error("drift energies must be pairwise distinct with distinct transition frequencies")]
    BadDrift,
}

/// Subsystem dimension for rotational quantum number `j`.
pub fn subsystem_dim(j: u32) -> u32 {
    6 * j + 7
}

/// Recovers `j` from a subsystem dimension.
pub fn j_from_dim(n: u32) -> Result<u32, OperatorError> {
    if n >= 7 && (n - 7) % 6 == 0 {
        Ok((n - 7) / 6)
    } else {
        Err(OperatorError::BadDimension(n))
    }
}
