//! State indexing for the three-level subsystem and the generalized Pauli
//! basis elements of su(n).

use std::fmt;

use serde::Serialize;

use super::OperatorError;

/// The three rotational levels of the subsystem: the lower level `(J, τ)` and
/// the two upper levels `(J+1, τ′)`, `(J+1, τ″)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Block {
    Tau,
    TauPrime,
    TauDoublePrime,
}

impl Block {
    /// Angular momentum of the block: `J` for τ, `J+1` for the upper levels.
    pub fn angular_momentum(self, j: u32) -> u32 {
        match self {
            Block::Tau => j,
            _ => j + 1,
        }
    }

    fn offset(self, j: u32) -> u32 {
        match self {
            Block::Tau => 0,
            Block::TauPrime => 2 * j + 1,
            Block::TauDoublePrime => 4 * j + 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Block::Tau => "tau",
            Block::TauPrime => "tau_p",
            Block::TauDoublePrime => "tau_pp",
        }
    }
}

/// A subsystem state `(level, M)`.
///
/// Flat indices enumerate the τ block first (`M = −J..J` → `0..2J`), then the
/// τ′ block (`2J+1..4J+3`), then the τ″ block (`4J+4..6J+6`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateIndex {
    pub block: Block,
    pub m: i64,
}

impl StateIndex {
    pub fn new(block: Block, m: i64) -> Self {
        Self { block, m }
    }

    pub fn flat(&self, j: u32) -> Result<u32, OperatorError> {
        let jm = i64::from(self.block.angular_momentum(j));
        if self.m.abs() > jm {
            return Err(OperatorError::StateOutOfRange(*self, j));
        }
        Ok(self.block.offset(j) + (self.m + jm) as u32)
    }

    pub fn from_flat(j: u32, flat: u32) -> Result<Self, OperatorError> {
        let n = super::subsystem_dim(j);
        if flat >= n {
            return Err(OperatorError::FlatOutOfRange(flat, n));
        }
        let block = if flat < 2 * j + 1 {
            Block::Tau
        } else if flat < 4 * j + 4 {
            Block::TauPrime
        } else {
            Block::TauDoublePrime
        };
        let m = i64::from(flat - block.offset(j))
            - i64::from(block.angular_momentum(j));
        Ok(Self { block, m })
    }
}

impl fmt::Display for StateIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.block.label(), self.m)
    }
}

/// The three kinds of generalized Pauli matrices spanning su(n):
///
/// ```text
/// G_jk = e_jk − e_kj      F_jk = i e_jk + i e_kj      D_jk = i e_jj − i e_kk
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    G,
    F,
    D,
}

/// A single generalized Pauli matrix, stored with `j < k` in flat order.
///
/// The orientation identities `G_kj = −G_jk`, `F_kj = F_jk`, `D_kj = −D_jk`
/// are applied at construction, so each basis element has a unique key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PauliElement {
    pub kind: Kind,
    pub j: u32,
    pub k: u32,
}

impl PauliElement {
    /// Canonicalizes `(kind, a, b)`, returning the element and the sign picked
    /// up by reorientation.
    pub fn canonical(kind: Kind, a: u32, b: u32) -> Result<(Self, i64), OperatorError> {
        if a == b {
            return Err(OperatorError::DegeneratePair);
        }
        if a < b {
            Ok((Self { kind, j: a, k: b }, 1))
        } else {
            let sign = match kind {
                Kind::G | Kind::D => -1,
                Kind::F => 1,
            };
            Ok((Self { kind, j: b, k: a }, sign))
        }
    }

    /// Convenience constructor from subsystem states; `a` and `b` may come in
    /// any order.
    pub fn from_states(
        kind: Kind,
        j: u32,
        a: StateIndex,
        b: StateIndex,
    ) -> Result<(Self, i64), OperatorError> {
        Self::canonical(kind, a.flat(j)?, b.flat(j)?)
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.j, self.k)
    }

    pub fn touches(&self, v: u32) -> bool {
        self.j == v || self.k == v
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{},{}]", self.kind, self.j, self.k)
    }
}
