use thiserror::Error;

use crate::graph::{Sign, SignedGraph};
use crate::trace::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {u} {v} {sign}")]
    DuplicateEdge { u: usize, v: usize, sign: Sign },
    #[error("edge {u} {v} {sign} not present")]
    MissingEdge { u: usize, v: usize, sign: Sign },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices exceeds the exhaustive-search cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a negative clique-forest")]
    NotCliqueForest,
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule:?} not applicable: {clause}")]
    NotApplicable { rule: RuleId, clause: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    /// A rule produced a graph violating the context invariants.
    #[error("{rule:?} broke an invariant: {reason}")]
    Invariant { rule: RuleId, reason: String },
}

impl RuleError {
    pub(crate) fn not_applicable(rule: RuleId, clause: impl Into<String>) -> RuleError {
        RuleError::NotApplicable { rule, clause: clause.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    /// No credited deletion applies but the residual is not a negative
    /// clique-forest.
    #[error("decomposition stuck on a residual graph with {} vertices", residual.n())]
    Stuck { residual: SignedGraph, removed: Vec<usize> },
    #[error("input graph is not connected")]
    NotConnected,
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot satisfy class constraints: {0}")]
    Infeasible(String),
    #[error("vertex {0} is universal")]
    UniversalVertex(usize),
    #[error("structure check failed: {0}")]
    Structure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error("planted partition rejected: {0}")]
    Partition(String),
    #[error("kernel of {observed} vertices exceeds bound {bound} ({name})")]
    BoundViolated { name: String, bound: i64, observed: i64 },
    #[error("certificate procedure failed: {reason}")]
    Certificate { reason: String, state: Option<SignedGraph> },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported input: {0}")]
    Precondition(String),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}
