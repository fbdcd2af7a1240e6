//! One-way reductions and the search for the modulator `S`.
//!
//! Deleting a connected set `X` whose removal keeps the graph connected is
//! safe when `k` drops by at most `4β(G[X]) - 4pt(G[X]) - 1`: if the rest is
//! a yes-instance for the reduced parameter, so is the whole graph. The
//! decomposition repeatedly deletes such sets of three vertices. Once the
//! accumulated credit reaches `k` the instance is a yes-instance; otherwise
//! the deleted vertices form `S` and what is left must be, up to switching,
//! a clique-forest with only negative edges.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::blocks::{all_blocks_are_cliques, block_decomposition, is_negative_clique_forest};
use crate::error::{DecomposeError, RuleError};
use crate::graph::{Instance, SignedGraph};
use crate::oracle::{beta_exact, is_balanced, pt, BalanceCertificate, QuarterValue, DEFAULT_CAP};
use crate::trace::{Applied, GraphEdit, Justification, RuleId, RuleStep, RuleTrace};

fn check_vertex(g: &SignedGraph, rule: RuleId, v: usize) -> Result<(), RuleError> {
    if v >= g.n() {
        return Err(RuleError::not_applicable(rule, format!("vertex {v} not in graph")));
    }
    Ok(())
}

fn delete_step(
    inst: &Instance,
    rule: RuleId,
    removed: Vec<usize>,
    delta_k: i64,
    justification: Option<Justification>,
) -> Applied {
    let edit = GraphEdit::delete(removed);
    let (graph, map) = edit.apply(&inst.graph).expect("vertices were validated");
    Applied {
        instance: Instance::new(graph, inst.k - delta_k),
        step: RuleStep { rule, edit, delta_k, justification },
        map,
    }
}

/// Deletes `v` together with `c >= 2` pairwise non-adjacent neighbours and
/// lowers `k` by `c - 1`. One-way: a yes-answer for the result implies one
/// for the input.
pub fn apply_rule6plus(inst: &Instance, v: usize, leaves: &[usize]) -> Result<Applied, RuleError> {
    let rule = RuleId::Rule6Plus;
    let g = &inst.graph;
    check_vertex(g, rule, v)?;
    let mut leaves = leaves.to_vec();
    leaves.sort_unstable();
    leaves.dedup();
    let c = leaves.len();
    if c < 2 {
        return Err(RuleError::not_applicable(rule, "needs at least two leaves"));
    }
    for &u in &leaves {
        check_vertex(g, rule, u)?;
        if u == v {
            return Err(RuleError::not_applicable(rule, "centre listed as a leaf"));
        }
        if !g.adjacent(v, u) {
            return Err(RuleError::not_applicable(rule, format!("leaf {u} is not a neighbour of {v}")));
        }
        if g.has_opposite_pair_between(v, u) {
            return Err(RuleError::not_applicable(rule, format!("opposite-sign pair between {v} and {u}")));
        }
    }
    for (i, &a) in leaves.iter().enumerate() {
        if let Some(&b) = leaves[i + 1..].iter().find(|&&b| g.adjacent(a, b)) {
            return Err(RuleError::not_applicable(rule, format!("leaves {a} and {b} are adjacent")));
        }
    }
    if !g.is_connected() {
        return Err(RuleError::not_applicable(rule, "graph is not connected"));
    }
    let mut removed = leaves;
    removed.push(v);
    removed.sort_unstable();
    if !g.connected_without(&removed) {
        return Err(RuleError::not_applicable(rule, "remainder is empty or disconnected"));
    }
    // A star with c simple edges is balanced: β = c, 4pt = 2c + c.
    let just = Justification { beta: c as i64, pt: QuarterValue(3 * c as i64) };
    Ok(delete_step(inst, rule, removed, c as i64 - 1, Some(just)))
}

/// Deletes a vertex incident to exactly one edge and lowers `k` by one.
pub fn apply_rule_a(inst: &Instance, v: usize) -> Result<Applied, RuleError> {
    let rule = RuleId::RuleA;
    let g = &inst.graph;
    check_vertex(g, rule, v)?;
    if g.degree(v) != 1 {
        return Err(RuleError::not_applicable(rule, format!("vertex {v} has degree {}", g.degree(v))));
    }
    if g.n() < 2 || !g.is_connected() {
        return Err(RuleError::not_applicable(rule, "graph is not connected"));
    }
    Ok(delete_step(inst, rule, vec![v], 1, None))
}

/// Guaranteed drop in `k` from deleting `X`: `4β(G[X]) - 4pt(G[X]) - 1`,
/// or `None` when that is not positive.
pub fn credit_of_set(g: &SignedGraph, x: &[usize]) -> Result<Option<i64>, RuleError> {
    Ok(credit_with_justification(g, x)?.map(|(c, _)| c))
}

fn credit_with_justification(g: &SignedGraph, x: &[usize]) -> Result<Option<(i64, Justification)>, RuleError> {
    let rule = RuleId::CreditedTriple;
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    for &v in &x {
        check_vertex(g, rule, v)?;
    }
    if x.is_empty() {
        return Err(RuleError::not_applicable(rule, "empty set"));
    }
    if !g.is_connected() {
        return Err(RuleError::not_applicable(rule, "graph is not connected"));
    }
    let gx = g.induced(&x);
    if !gx.is_connected() {
        return Err(RuleError::not_applicable(rule, "G[X] is not connected"));
    }
    if !g.connected_without(&x) {
        return Err(RuleError::not_applicable(rule, "G - X is empty or disconnected"));
    }
    piece_credit(&gx)
}

fn piece_credit(gx: &SignedGraph) -> Result<Option<(i64, Justification)>, RuleError> {
    let beta = beta_exact(gx)?.beta as i64;
    let p = pt(gx);
    let credit = 4 * beta - p.0 - 1;
    Ok((credit >= 1).then_some((credit, Justification { beta, pt: p })))
}

/// Deletes `X` after checking [`credit_of_set`]; `k` drops by the credit.
pub fn apply_credited(inst: &Instance, x: &[usize]) -> Result<Applied, RuleError> {
    let (credit, just) = credit_with_justification(&inst.graph, x)?
        .ok_or_else(|| RuleError::not_applicable(RuleId::CreditedTriple, "credit is not positive"))?;
    let mut removed = x.to_vec();
    removed.sort_unstable();
    removed.dedup();
    Ok(delete_step(inst, RuleId::CreditedTriple, removed, credit, Some(just)))
}

/// A switching set turning `g` into a negative clique-forest, if one exists.
pub fn negative_clique_forest_switching(g: &SignedGraph) -> Option<Vec<usize>> {
    if is_negative_clique_forest(g) {
        return Some(Vec::new());
    }
    if g.has_opposite_pair() || !all_blocks_are_cliques(g, &[]) {
        return None;
    }
    // Switching to all-negative is possible iff the negated graph is balanced.
    match is_balanced(&g.negated()) {
        BalanceCertificate::Balanced(a) => Some((0..g.n()).filter(|&v| a.side(v) == 2).collect()),
        BalanceCertificate::Unbalanced(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DecompositionOutcome {
    /// Accumulated credit reached `k`; `trace` is the certificate, with ids
    /// relative to the successive residual graphs.
    Yes { trace: RuleTrace, credit: i64 },
    /// `switched - modulator` is a negative clique-forest, where `switched` is
    /// the input switched at `switching`. `deletions` records the credited
    /// deletions (credit below `k`); `padded` lists members of `modulator` added
    /// without credit because no creditable triple remained.
    Reduced {
        modulator: Vec<usize>,
        padded: Vec<usize>,
        switching: Vec<usize>,
        #[serde(skip)]
        switched: SignedGraph,
        deletions: RuleTrace,
        credit: i64,
    },
}

impl DecompositionOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, DecompositionOutcome::Yes { .. })
    }
}

/// Block visiting order for the triple search: leaf blocks before the rest,
/// deeper blocks of the block-cut tree first, then by smallest vertex.
fn block_order(g: &SignedGraph) -> Vec<Vec<usize>> {
    let dec = block_decomposition(g, &[]);
    let nb = dec.blocks.len();
    let mut depth = vec![usize::MAX; nb];
    for comp in g.connected_components() {
        let start = dec.blocks_of[comp[0]][0];
        depth[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(b) = queue.pop_front() {
            for &v in &dec.blocks[b].vertices {
                for &nbk in &dec.blocks_of[v] {
                    if depth[nbk] == usize::MAX {
                        depth[nbk] = depth[b] + 1;
                        queue.push_back(nbk);
                    }
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..nb).collect();
    idx.sort_by_key(|&b| (!dec.blocks[b].is_leaf_block(), std::cmp::Reverse(depth[b]), dec.blocks[b].smallest()));
    idx.into_iter().map(|b| dec.blocks[b].vertices.clone()).collect()
}

/// Connected triples touching `block`, ascending.
fn triples_touching(g: &SignedGraph, block: &[usize]) -> BTreeSet<[usize; 3]> {
    let mut out = BTreeSet::new();
    for &v in block {
        let nv = g.neighbors(v);
        for &a in &nv {
            for b in nv.iter().copied().chain(g.neighbors(a)) {
                if b != v && b != a {
                    let mut t = [v, a, b];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
    }
    out
}

/// First creditable triple in search order, with its credit.
pub fn find_credited_triple(g: &SignedGraph) -> Option<([usize; 3], i64, Justification)> {
    let mut tried: HashSet<[usize; 3]> = HashSet::new();
    for block in block_order(g) {
        for t in triples_touching(g, &block) {
            if !tried.insert(t) {
                continue;
            }
            let Ok(Some((credit, just))) = piece_credit(&g.induced(&t)) else { continue };
            if g.connected_without(&t) {
                return Some((t, credit, just));
            }
        }
    }
    None
}

/// Either certifies `(G, k)` as a yes-instance or finds `S` with
/// `|S| <= 3k` such that `G - S` is, after switching, a negative
/// clique-forest.
pub fn decompose(inst: &Instance) -> Result<DecompositionOutcome, DecomposeError> {
    let g0 = &inst.graph;
    if !g0.is_connected() {
        return Err(DecomposeError::NotConnected);
    }
    let mut residual = Instance::new(g0.clone(), inst.k);
    // residual id -> original id
    let mut ids: Vec<usize> = (0..g0.n()).collect();
    let mut removed: Vec<usize> = Vec::new();
    let mut trace = RuleTrace::default();
    let mut credit = 0i64;
    loop {
        if credit >= inst.k {
            return Ok(DecompositionOutcome::Yes { trace, credit });
        }
        if let Some(flip) = negative_clique_forest_switching(&residual.graph) {
            let switching: Vec<usize> = flip.iter().map(|&v| ids[v]).collect();
            removed.sort_unstable();
            return Ok(DecompositionOutcome::Reduced {
                modulator: removed,
                padded: Vec::new(),
                switched: g0.switch(&switching),
                switching,
                deletions: trace,
                credit,
            });
        }
        let Some((triple, _, _)) = find_credited_triple(&residual.graph) else {
            if residual.graph.n() <= DEFAULT_CAP {
                let beta = beta_exact(&residual.graph).map_err(RuleError::from)?.beta as i64;
                let p = pt(&residual.graph);
                let slack = 4 * beta - p.0;
                if credit + slack >= inst.k {
                    trace.push(RuleStep {
                        rule: RuleId::Remainder,
                        edit: GraphEdit::delete((0..residual.graph.n()).collect()),
                        delta_k: slack,
                        justification: Some(Justification { beta, pt: p }),
                    });
                    return Ok(DecompositionOutcome::Yes { trace, credit: credit + slack });
                }
            }
            return pad(g0, inst.k, residual.graph, ids, removed, trace, credit);
        };
        let applied = apply_credited(&residual, &triple)?;
        credit += applied.step.delta_k;
        removed.extend(triple.iter().map(|&v| ids[v]));
        let mut next_ids = vec![0; applied.instance.graph.n()];
        for (old, new) in applied.map.iter().enumerate() {
            if let Some(new) = new {
                next_ids[*new] = ids[old];
            }
        }
        ids = next_ids;
        trace.push(applied.step);
        residual = applied.instance;
    }
}

/// Blocks that keep `g` from being a negative clique-forest up to switching.
fn bad_blocks(g: &SignedGraph) -> Vec<Vec<usize>> {
    block_decomposition(g, &[])
        .blocks
        .into_iter()
        .filter(|b| {
            let sub = g.induced(&b.vertices);
            let q = sub.n();
            sub.has_opposite_pair() || sub.m() != q * (q - 1) / 2 || !is_balanced(&sub.negated()).is_balanced()
        })
        .map(|b| b.vertices)
        .collect()
}

/// Moves residual vertices into `S` without credit until the residual is
/// a negative clique-forest up to switching, preferring vertices that lie in
/// the most offending blocks, then higher degree, then smaller id.
fn pad(
    g0: &SignedGraph,
    k: i64,
    mut residual: SignedGraph,
    mut ids: Vec<usize>,
    mut removed: Vec<usize>,
    deletions: RuleTrace,
    credit: i64,
) -> Result<DecompositionOutcome, DecomposeError> {
    let limit = usize::try_from(3 * k.max(0)).unwrap_or(usize::MAX);
    let mut padded = Vec::new();
    loop {
        if let Some(flip) = negative_clique_forest_switching(&residual) {
            let switching: Vec<usize> = flip.iter().map(|&v| ids[v]).collect();
            removed.sort_unstable();
            padded.sort_unstable();
            return Ok(DecompositionOutcome::Reduced {
                modulator: removed,
                padded,
                switched: g0.switch(&switching),
                switching,
                deletions,
                credit,
            });
        }
        if removed.len() >= limit {
            removed.sort_unstable();
            return Err(DecomposeError::Stuck { residual, removed });
        }
        let mut hits = vec![0usize; residual.n()];
        for b in bad_blocks(&residual) {
            for v in b {
                hits[v] += 1;
            }
        }
        let v = (0..residual.n())
            .max_by_key(|&v| (hits[v], residual.degree(v), std::cmp::Reverse(v)))
            .expect("a graph that is not a clique-forest has vertices");
        removed.push(ids[v]);
        padded.push(ids[v]);
        let (next, _) = residual.without(&[v]);
        residual = next;
        ids.remove(v);
    }
}
