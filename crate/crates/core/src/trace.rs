//! Ordered logs of rule applications and the graph edits they perform.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Edge, Instance, Sign, SignedGraph};
use crate::oracle::QuarterValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R8,
    R9,
    R10a,
    R10b,
    R11,
    Rule6Plus,
    RuleA,
    CreditedTriple,
    /// Deletion of the whole connected remainder, credited with its exact
    /// slack `4β - 4pt`. Ends a yes-certificate.
    Remainder,
    /// Sign switching of a vertex set; answer-preserving, `k` unchanged.
    Switching,
    /// Deletion of a vertex isolated in `G - S` with no `S`-neighbour.
    IsolatedVertex,
}

impl RuleId {
    /// Whether the rule preserves the answer in both directions.
    pub fn is_two_way(self) -> bool {
        !matches!(self, RuleId::Rule6Plus | RuleId::CreditedTriple)
    }
}

/// A graph rewrite applied in the order: switch `flip`, delete
/// `remove_edges`, append a vertex with id `n` adjacent to `add_vertex`,
/// then delete `remove_vertices` and compact ids preserving order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdit {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flip: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub remove_edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add_vertex: Option<Vec<(usize, Sign)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub remove_vertices: Vec<usize>,
}

impl GraphEdit {
    pub fn delete(vertices: Vec<usize>) -> GraphEdit {
        GraphEdit { remove_vertices: vertices, ..GraphEdit::default() }
    }

    pub fn switching(flip: Vec<usize>) -> GraphEdit {
        GraphEdit { flip, ..GraphEdit::default() }
    }

    /// Applies the edit. The map sends every pre-edit id (plus the appended
    /// vertex, if any, at index `n`) to its post-edit id.
    pub fn apply(&self, g: &SignedGraph) -> Result<(SignedGraph, Vec<Option<usize>>), GraphError> {
        for &v in self.flip.iter().chain(&self.remove_vertices) {
            if v >= g.n() + usize::from(self.add_vertex.is_some()) {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() });
            }
        }
        let mut cur = if self.flip.is_empty() { g.clone() } else { g.switch(&self.flip) };
        if !self.remove_edges.is_empty() {
            cur = cur.without_edges(&self.remove_edges)?;
        }
        if let Some(incident) = &self.add_vertex {
            cur = cur.with_new_vertex(incident)?;
        }
        Ok(cur.without(&self.remove_vertices))
    }
}

/// Exact β and pt of a removed piece, kept as evidence for a credited step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Justification {
    pub beta: i64,
    pub pt: QuarterValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleStep {
    pub rule: RuleId,
    /// Ids refer to the graph the step was applied to.
    pub edit: GraphEdit,
    /// Amount subtracted from `k`.
    pub delta_k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<Justification>,
}

/// Result of a single rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub instance: Instance,
    pub step: RuleStep,
    /// Pre-step id to post-step id, as returned by [`GraphEdit::apply`].
    pub map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTrace {
    pub steps: Vec<RuleStep>,
}

impl RuleTrace {
    pub fn push(&mut self, step: RuleStep) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_delta(&self) -> i64 {
        self.steps.iter().map(|s| s.delta_k).sum()
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    /// Re-applies every step to `start`.
    pub fn replay(&self, start: &Instance) -> Result<Instance, GraphError> {
        let mut cur = start.clone();
        for step in &self.steps {
            let (graph, _) = step.edit.apply(&cur.graph)?;
            cur = Instance::new(graph, cur.k - step.delta_k);
        }
        Ok(cur)
    }
}
