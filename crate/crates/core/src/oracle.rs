//! Exact ground truth by exhaustive search.
//!
//! All slack arithmetic is done in quarter units so that comparisons such as
//! `beta >= pt + k/4` stay in the integers.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::graph::{Edge, SignedGraph};

/// Default largest vertex count the exhaustive searches accept.
pub const DEFAULT_CAP: usize = 24;

/// Hard ceiling; assignments are stored in a `u64`.
pub const MAX_CAP: usize = 40;

/// An exact edge-count expression multiplied by four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuarterValue(pub i64);

impl QuarterValue {
    pub fn from_whole(x: i64) -> QuarterValue {
        QuarterValue(4 * x)
    }

    pub fn quarters(self) -> i64 {
        self.0
    }
}

impl Add for QuarterValue {
    type Output = QuarterValue;
    fn add(self, rhs: QuarterValue) -> QuarterValue {
        QuarterValue(self.0 + rhs.0)
    }
}

impl Sub for QuarterValue {
    type Output = QuarterValue;
    fn sub(self, rhs: QuarterValue) -> QuarterValue {
        QuarterValue(self.0 - rhs.0)
    }
}

impl fmt::Display for QuarterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/4", self.0)
    }
}

/// Side (1 or 2) of every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    /// Every vertex on side 1.
    pub fn uniform(n: usize) -> Assignment {
        Assignment(vec![1; n])
    }

    pub fn from_sides(sides: Vec<u8>) -> Result<Assignment, OracleError> {
        if sides.iter().any(|&s| s != 1 && s != 2) {
            return Err(OracleError::Invalid("sides must be 1 or 2".into()));
        }
        Ok(Assignment(sides))
    }

    /// Bit `i` set puts vertex `i` on side 2.
    pub fn from_mask(n: usize, mask: u64) -> Assignment {
        Assignment((0..n).map(|i| if mask >> i & 1 == 1 { 2 } else { 1 }).collect())
    }

    pub fn side(&self, v: usize) -> u8 {
        self.0[v]
    }

    pub fn sides(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `2m + n - t` for a graph with `t` components.
pub fn pt(g: &SignedGraph) -> QuarterValue {
    QuarterValue((2 * g.m() + g.n() - g.component_count()) as i64)
}

fn satisfied(e: &Edge, side_u: u8, side_v: u8) -> bool {
    (side_u == side_v) != e.sign.is_negative()
}

/// Edges made consistent by `a`: positive edges inside a side, negative
/// edges across.
pub fn consistent_edge_count(g: &SignedGraph, a: &Assignment) -> usize {
    g.edges().iter().filter(|e| satisfied(e, a.side(e.u), a.side(e.v))).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaResult {
    pub beta: usize,
    /// Lexicographically smallest optimal assignment with vertex 0 on side 1.
    pub assignment: Assignment,
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap.min(MAX_CAP) {
        return Err(OracleError::CapExceeded { n, cap: cap.min(MAX_CAP) });
    }
    Ok(())
}

/// True when `a` precedes `b` as a side sequence read from vertex 0.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && (b >> diff.trailing_zeros()) & 1 == 1
}

/// Walks all masks over `free` low bits (shifted left by `shift`) in Gray
/// code order, maintaining `score` through `delta(vertex, mask_before)`, and
/// returns the best score with its lexicographically smallest mask.
fn gray_search(free: usize, shift: usize, initial: i64, mut delta: impl FnMut(usize, u64) -> i64) -> (i64, u64) {
    let mut mask = 0u64;
    let mut score = initial;
    let (mut best, mut best_mask) = (score, 0u64);
    for i in 1u64..(1u64 << free) {
        let v = i.trailing_zeros() as usize + shift;
        score += delta(v, mask);
        mask ^= 1 << v;
        if score > best || (score == best && lex_less(mask, best_mask)) {
            best = score;
            best_mask = mask;
        }
    }
    (best, best_mask)
}

/// Maximum number of edges of a balanced subgraph, with the default cap.
pub fn beta_exact(g: &SignedGraph) -> Result<BetaResult, OracleError> {
    beta_exact_capped(g, DEFAULT_CAP)
}

/// Exhaustive β over the `2^(n-1)` assignments that keep vertex 0 on side 1.
pub fn beta_exact_capped(g: &SignedGraph, cap: usize) -> Result<BetaResult, OracleError> {
    let n = g.n();
    check_cap(n, cap)?;
    if n <= 1 {
        return Ok(BetaResult { beta: 0, assignment: Assignment::uniform(n) });
    }
    let initial = consistent_edge_count(g, &Assignment::uniform(n)) as i64;
    let (best, mask) = gray_search(n - 1, 1, initial, |v, mask| {
        let sv = mask >> v & 1;
        g.incident(v)
            .iter()
            .map(|&(w, s)| {
                let same = sv == mask >> w & 1;
                if same != s.is_negative() {
                    -1
                } else {
                    1
                }
            })
            .sum()
    });
    Ok(BetaResult { beta: best as usize, assignment: Assignment::from_mask(n, mask) })
}

/// Decision predicate: `4β(G) >= 4pt(G) + k` for connected `G`.
pub fn answer_exact(g: &SignedGraph, k: i64) -> Result<bool, OracleError> {
    answer_exact_capped(g, k, DEFAULT_CAP)
}

pub fn answer_exact_capped(g: &SignedGraph, k: i64, cap: usize) -> Result<bool, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::NotConnected);
    }
    if k <= 0 {
        // β >= pt always holds.
        return Ok(true);
    }
    let beta = beta_exact_capped(g, cap)?.beta as i64;
    Ok(4 * beta >= pt(g).0 + k)
}

/// `4β(G) - 4pt(G)`: the largest `k` for which `(G, k)` is a yes-instance.
pub fn slack(g: &SignedGraph) -> Result<i64, OracleError> {
    slack_capped(g, DEFAULT_CAP)
}

pub fn slack_capped(g: &SignedGraph, cap: usize) -> Result<i64, OracleError> {
    Ok(4 * beta_exact_capped(g, cap)?.beta as i64 - pt(g).0)
}

/// A closed walk through distinct vertices; `edges[i]` joins `vertices[i]`
/// and `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl Cycle {
    pub fn negative_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.sign.is_negative()).count()
    }

    /// Checks that this is a cycle of `g` with an odd number of negative edges.
    pub fn verify_negative(&self, g: &SignedGraph) -> bool {
        let len = self.vertices.len();
        if len < 2 || self.edges.len() != len {
            return false;
        }
        let mut seen = vec![false; g.n()];
        for &v in &self.vertices {
            if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        if len == 2 && self.edges[0] == self.edges[1] {
            return false;
        }
        let closes = self.edges.iter().enumerate().all(|(i, e)| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % len]);
            g.has_edge(e.u, e.v, e.sign) && ((e.u, e.v) == (a, b) || (e.u, e.v) == (b, a))
        });
        closes && self.negative_edges() % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BalanceCertificate {
    Balanced(Assignment),
    Unbalanced(Cycle),
}

impl BalanceCertificate {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceCertificate::Balanced(_))
    }

    /// Linear-time check of the certificate against `g`.
    pub fn verify(&self, g: &SignedGraph) -> bool {
        match self {
            BalanceCertificate::Balanced(a) => a.len() == g.n() && consistent_edge_count(g, a) == g.m(),
            BalanceCertificate::Unbalanced(c) => c.verify_negative(g),
        }
    }
}

/// Parity 2-colouring; on the first conflict, returns the odd cycle closed
/// by the conflicting edge and the two BFS tree paths.
pub fn is_balanced(g: &SignedGraph) -> BalanceCertificate {
    let n = g.n();
    let mut side = vec![u8::MAX; n];
    let mut depth = vec![0usize; n];
    let mut parent: Vec<Option<(usize, Edge)>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 1;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &(y, s) in g.incident(x) {
                let want = if s.is_negative() { 3 - side[x] } else { side[x] };
                if side[y] == u8::MAX {
                    side[y] = want;
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, Edge::new(x, y, s)));
                    queue.push_back(y);
                } else if side[y] != want {
                    return BalanceCertificate::Unbalanced(conflict_cycle(&parent, &depth, x, y, Edge::new(x, y, s)));
                }
            }
        }
    }
    BalanceCertificate::Balanced(Assignment(side))
}

fn conflict_cycle(parent: &[Option<(usize, Edge)>], depth: &[usize], x: usize, y: usize, closing: Edge) -> Cycle {
    let (mut a, mut b) = (x, y);
    let (mut path_a, mut path_b) = (vec![a], vec![b]);
    let (mut edges_a, mut edges_b) = (Vec::new(), Vec::new());
    let climb = |v: &mut usize, path: &mut Vec<usize>, edges: &mut Vec<Edge>| {
        let (p, e) = parent[*v].expect("non-root vertex has a parent");
        edges.push(e);
        path.push(p);
        *v = p;
    };
    while depth[a] > depth[b] {
        climb(&mut a, &mut path_a, &mut edges_a);
    }
    while depth[b] > depth[a] {
        climb(&mut b, &mut path_b, &mut edges_b);
    }
    while a != b {
        climb(&mut a, &mut path_a, &mut edges_a);
        climb(&mut b, &mut path_b, &mut edges_b);
    }
    path_b.pop();
    let vertices = path_a.into_iter().chain(path_b.into_iter().rev()).collect();
    let edges = edges_a.into_iter().chain(edges_b.into_iter().rev()).chain(std::iter::once(closing)).collect();
    Cycle { vertices, edges }
}

/// Exhaustive Max Cut with Weighted Vertices: every edge (sign ignored)
/// scores 1 when cut, vertex `x` scores `w1[x]` on side 1 and `w2[x]` on
/// side 2.
pub fn mcwv_exact(t: &SignedGraph, w1: &[u64], w2: &[u64]) -> Result<u64, OracleError> {
    mcwv_exact_capped(t, w1, w2, DEFAULT_CAP)
}

pub fn mcwv_exact_capped(t: &SignedGraph, w1: &[u64], w2: &[u64], cap: usize) -> Result<u64, OracleError> {
    let n = t.n();
    check_cap(n, cap)?;
    if w1.len() != n || w2.len() != n {
        return Err(OracleError::Invalid("weight vectors must have one entry per vertex".into()));
    }
    let initial = w1.iter().sum::<u64>() as i64;
    let (best, _) = gray_search(n, 0, initial, |v, mask| {
        let sv = mask >> v & 1;
        let cut_delta: i64 = t.incident(v).iter().map(|&(w, _)| if sv == mask >> w & 1 { 1 } else { -1 }).sum();
        let weight_delta = if sv == 0 { w2[v] as i64 - w1[v] as i64 } else { w1[v] as i64 - w2[v] as i64 };
        cut_delta + weight_delta
    });
    Ok(best as u64)
}

/// Quantities of the two-part lower bound for a split `V = U ∪ W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitBoundReport {
    pub beta_g: i64,
    pub beta_u: i64,
    pub beta_w: i64,
    pub cross_edges: i64,
    /// `4β(G[U]) - 4pt(G[U])`.
    pub k1: i64,
    pub k2: i64,
    pub c1: i64,
    pub c2: i64,
    pub pt_g: QuarterValue,
    /// `4β(G) >= 4β(G[U]) + 4β(G[W]) + 2|E(U,W)|`
    pub additive_holds: bool,
    /// `4β(G) >= 4pt(G) + k1 + k2 - (c1 + c2 - 1)`
    pub slack_holds: bool,
}

/// Evaluates both inequalities of the two-part lower bound on `(G, U)`.
pub fn verify_split_bound(g: &SignedGraph, u: &[usize]) -> Result<SplitBoundReport, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::NotConnected);
    }
    let mut in_u = vec![false; g.n()];
    for &x in u {
        if x >= g.n() {
            return Err(OracleError::Invalid(format!("vertex {x} out of range")));
        }
        in_u[x] = true;
    }
    let u_set: Vec<usize> = (0..g.n()).filter(|&x| in_u[x]).collect();
    let w_set: Vec<usize> = (0..g.n()).filter(|&x| !in_u[x]).collect();
    if u_set.is_empty() || w_set.is_empty() {
        return Err(OracleError::Invalid("U must be a non-empty proper subset".into()));
    }
    let (gu, gw) = (g.induced(&u_set), g.induced(&w_set));
    let beta_g = beta_exact(g)?.beta as i64;
    let beta_u = beta_exact(&gu)?.beta as i64;
    let beta_w = beta_exact(&gw)?.beta as i64;
    let cross_edges = g.edges().iter().filter(|e| in_u[e.u] != in_u[e.v]).count() as i64;
    let k1 = 4 * beta_u - pt(&gu).0;
    let k2 = 4 * beta_w - pt(&gw).0;
    let c1 = gu.component_count() as i64;
    let c2 = gw.component_count() as i64;
    let pt_g = pt(g);
    Ok(SplitBoundReport {
        beta_g,
        beta_u,
        beta_w,
        cross_edges,
        k1,
        k2,
        c1,
        c2,
        pt_g,
        additive_holds: 4 * beta_g >= 4 * beta_u + 4 * beta_w + 2 * cross_edges,
        slack_holds: 4 * beta_g >= pt_g.0 + k1 + k2 - (c1 + c2 - 1),
    })
}
