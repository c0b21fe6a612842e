//! Learning and testing of structured unitaries from black-box oracles.
//!
//! The crate simulates oracle access to an unknown unitary `U` (and its
//! conjugate) and implements:
//!
//! - one-query identification of Pauli operations via Bell sampling,
//! - exact learning of Clifford operations with `2n+1` forward and `2n`
//!   conjugate queries,
//! - recursive exact learning of level-`k` hierarchy operations,
//! - majority-vote approximate learning of unitaries close to a hierarchy
//!   element, and
//! - a CLOSE/FAR Clifford property tester.
//!
//! Every oracle invocation is recorded in a [`oracle::QueryLedger`] and the
//! learners assert their ledgers against closed-form query budgets.
//!
//! The Pauli and Clifford layers ([`gf2pauli`], [`tableau`]) are exact
//! bit-packed GF(2) symplectic algebra and scale to hundreds of qubits;
//! the dense layer ([`densesim`]) realises small instances as explicit
//! matrices for cross-validation and for non-Clifford oracles.

pub mod cli;
pub mod cltest;
pub mod densesim;
mod gf2;
pub mod gf2pauli;
pub mod learn;
pub mod metric;
pub mod oracle;
pub mod tableau;

pub use gf2pauli::{GeneratorIndex, PauliOperator};
pub use tableau::{CliffordCircuit, CliffordTableau};

/// Default dense-realisation limit: matrices up to `2^6 = 64` rows.
pub const DEFAULT_DENSE_LIMIT: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("n = {n} exceeds the dense limit {limit}")]
    DenseLimitExceeded { n: usize, limit: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("operator is not Hermitian (phase must be +1 or -1)")]
    NotHermitian,
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("oracle is not a Clifford operation: {0}")]
    NotClifford(String),
    #[error("oracle is not in hierarchy level {k}: {msg}")]
    NotInHierarchy { k: usize, msg: String },
    #[error("conjugation table is inconsistent: {0}")]
    InconsistentTable(String),
    #[error("numerical consistency check failed: {0}")]
    NumericalInconsistency(String),
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("property violation: {0}")]
    PropertyViolation(String),
    #[error("config error at {path}: {msg}")]
    Config { path: String, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
