//! Exact executable replay of the six-step generation argument.
//!
//! Starting from the drift and the four structural drives, the executor
//! isolates basis elements of su(6J+7) step by step, entirely in exact
//! radical arithmetic:
//!
//! 1. circular combinations and ladder inversion isolate every τ↔τ′ ladder
//!    element;
//! 2. ladder inversion on the M-conserving drive plus double commutators
//!    isolate every M-diagonal τ↔τ″ element;
//! 3. double commutators against those diagonals split the remaining τ↔τ″
//!    drive into groups centered on each M;
//! 4. the two lowest-M groups are resolved element by element (base of the
//!    induction);
//! 5. induction over M resolves every remaining group;
//! 6. the isolated elements form a connected transition graph, and
//!    edge-concatenation commutators generate all of su(6J+7).
//!
//! Every membership claim is established by the generic exact commutator
//! engine; the closed forms the steps are expected to produce are asserted as
//! postconditions, never substituted.

mod graph;
mod steps;
mod vandermonde;

pub use graph::TransitionGraph;
pub use steps::{verify_proof, ProofOutcome};
pub use vandermonde::{isolate_ladder, ladder_nodes, vandermonde_determinant};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::oplib::PauliElement;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProofError {
    #[error("drive construction failed: {0}")]
    Drive(#[from] crate::drives::DriveError),
    #[error("operator error: {0}")]
    Operator(#[from] crate::oplib::OperatorError),
    #[error("ladder coefficient collision: nodes {0} and {1} coincide")]
    CoefficientCollision(String, String),
    #[error("{context}: expected {expected}, got {got}")]
    UnexpectedOperator { context: String, expected: String, got: String },
    #[error("{context}: operator is not a single basis element: {got}")]
    NotSingle { context: String, got: String },
    #[error("transition graph is disconnected; components: {0:?}")]
    Disconnected(Vec<Vec<String>>),
    #[error("final element count {got} does not match n²−1 = {expected}")]
    CountMismatch { expected: usize, got: usize },
    #[error("element {0} was produced twice with different provenance")]
    DuplicateElement(String),
}

/// Proof-step provenance tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepTag {
    Step1,
    Step2,
    Step3,
    Step4,
    Step5,
    Step6,
}

impl StepTag {
    pub const ALL: [StepTag; 6] = [
        StepTag::Step1,
        StepTag::Step2,
        StepTag::Step3,
        StepTag::Step4,
        StepTag::Step5,
        StepTag::Step6,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StepTag::Step1 => "step1",
            StepTag::Step2 => "step2",
            StepTag::Step3 => "step3",
            StepTag::Step4 => "step4",
            StepTag::Step5 => "step5",
            StepTag::Step6 => "step6",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        StepTag::ALL.into_iter().find(|t| t.label() == s)
    }
}

/// Basis elements known to lie in the generated algebra, with the step that
/// established each one. Elements are only ever added.
#[derive(Debug, Clone, Default)]
pub struct IsolatedSet {
    map: BTreeMap<PauliElement, StepTag>,
}

impl IsolatedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, e: &PauliElement) -> bool {
        self.map.contains_key(e)
    }

    pub fn insert(&mut self, e: PauliElement, tag: StepTag) -> Result<(), ProofError> {
        match self.map.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(tag);
                Ok(())
            }
            std::collections::btree_map::Entry::Occupied(o) => {
                if *o.get() <= tag {
                    // Re-derivations of an already-known element are harmless.
                    Ok(())
                } else {
                    Err(ProofError::DuplicateElement(e.to_string()))
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn count_with_tag(&self, tag: StepTag) -> usize {
        self.map.values().filter(|t| **t == tag).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliElement, &StepTag)> {
        self.map.iter()
    }
}

/// Per-step accounting in a proof report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StepReport {
    pub tag: StepTag,
    pub new_elements: usize,
    pub cumulative: usize,
}

/// Machine-readable outcome of a proof run.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ProofReport {
    pub schema: u32,
    pub j: u32,
    pub n: u32,
    pub target_dim: usize,
    pub steps: Vec<StepReport>,
    pub pass: bool,
    pub failures: Vec<String>,
}
