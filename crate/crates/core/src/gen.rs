//! Seeded instance generators, planted class partitions and their
//! structural checks, and the two hardness transforms.
//!
//! All randomness comes from a ChaCha8 stream seeded with a `u64`, so a
//! given parameter set always yields the same graph.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::graph::{Sign, SignedGraph};
use crate::oracle::Assignment;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_prob(name: &str, p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::InvalidParameter(format!("{name} = {p} is not a probability")))
    }
}

fn sign_for(rng: &mut ChaCha8Rng, positive_p: f64) -> Sign {
    if rng.random_bool(positive_p) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Edge set under construction; at most one edge per pair.
struct Builder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    signed: Vec<(usize, usize, Sign)>,
}

impl Builder {
    fn new(n: usize) -> Builder {
        Builder { n, edges: BTreeSet::new(), signed: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, sign: Sign) {
        let key = (u.min(v), u.max(v));
        if u != v && self.edges.insert(key) {
            self.signed.push((key.0, key.1, sign));
        }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    fn graph(&self) -> SignedGraph {
        SignedGraph::from_edges(self.n, self.signed.iter().copied()).expect("builder keeps edges simple")
    }

    /// Adds edges between components, only between pairs accepted by
    /// `allowed`, until the graph is connected.
    fn connect(
        &mut self,
        rng: &mut ChaCha8Rng,
        positive_p: f64,
        allowed: impl Fn(usize, usize) -> bool,
    ) -> Result<(), GenError> {
        loop {
            let comps = self.graph().connected_components();
            if comps.len() <= 1 {
                return Ok(());
            }
            let mut comp_of = vec![0; self.n];
            for (i, c) in comps.iter().enumerate() {
                for &v in c {
                    comp_of[v] = i;
                }
            }
            let pairs: Vec<(usize, usize)> = (0..self.n)
                .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
                .filter(|&(a, b)| comp_of[a] != comp_of[b] && allowed(a, b))
                .collect();
            let touching: Vec<(usize, usize)> =
                pairs.iter().copied().filter(|&(a, b)| comp_of[a] == 0 || comp_of[b] == 0).collect();
            let pool = if touching.is_empty() { &pairs } else { &touching };
            let &(a, b) = pool
                .choose(rng)
                .ok_or_else(|| GenError::Infeasible("no permitted edge joins the components".into()))?;
            let sign = sign_for(rng, positive_p);
            self.add(a, b, sign);
        }
    }
}

/// All-negative `K_n` for odd `n >= 3`, whose optimum equals the lower bound.
pub fn gen_negative_clique(n: usize) -> Result<SignedGraph, GenError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(GenError::InvalidParameter(format!("negative clique needs odd n >= 3, got {n}")));
    }
    Ok(SignedGraph::complete(n, Sign::Negative))
}

/// Connected random graph: every pair is an edge with probability `edge_p`,
/// positive with probability `positive_p`; components are then joined.
pub fn random_signed_graph(n: usize, edge_p: f64, positive_p: f64, seed: u64) -> Result<SignedGraph, GenError> {
    check_prob("edge_p", edge_p)?;
    check_prob("positive_p", positive_p)?;
    let mut rng = seeded(seed);
    let mut b = Builder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_p) {
                let s = sign_for(&mut rng, positive_p);
                b.add(u, v, s);
            }
        }
    }
    b.connect(&mut rng, positive_p, |_, _| true)?;
    Ok(b.graph())
}

/// Random negative clique-forest on `n` vertices. Blocks have between 2 and
/// `max_block` vertices; a new tree is started with probability `new_tree_p`.
pub fn random_clique_forest(n: usize, max_block: usize, new_tree_p: f64, seed: u64) -> Result<SignedGraph, GenError> {
    check_prob("new_tree_p", new_tree_p)?;
    if max_block < 2 {
        return Err(GenError::InvalidParameter("max_block must be at least 2".into()));
    }
    let mut rng = seeded(seed);
    let mut b = Builder::new(n);
    let mut placed = 0usize;
    while placed < n {
        if placed == 0 || rng.random_bool(new_tree_p) {
            placed += 1;
            continue;
        }
        let anchor = rng.random_range(0..placed);
        let q = rng.random_range(2..=max_block).min(n - placed + 1);
        let members: Vec<usize> = std::iter::once(anchor).chain(placed..placed + q - 1).collect();
        for (i, &a) in members.iter().enumerate() {
            for &c in &members[i + 1..] {
                b.add(a, c, Sign::Negative);
            }
        }
        placed += q - 1;
    }
    Ok(b.graph())
}

/// Connected graph whose first `forest_n` vertices induce a random negative
/// clique-forest and whose last `modulator_size` vertices form the returned
/// modulator. Edges at the modulator appear with probability `attach_p`
/// and are positive with probability `positive_p`.
pub fn random_with_modulator(
    forest_n: usize,
    modulator_size: usize,
    max_block: usize,
    attach_p: f64,
    positive_p: f64,
    seed: u64,
) -> Result<(SignedGraph, Vec<usize>), GenError> {
    check_prob("attach_p", attach_p)?;
    check_prob("positive_p", positive_p)?;
    let mut rng = seeded(seed);
    let new_tree_p = if modulator_size == 0 { 0.0 } else { 0.3 };
    let forest = random_clique_forest(forest_n, max_block, new_tree_p, rng.random())?;
    let n = forest_n + modulator_size;
    let mut b = Builder::new(n);
    for e in forest.edges() {
        b.add(e.u, e.v, e.sign);
    }
    let s: Vec<usize> = (forest_n..n).collect();
    for &x in &s {
        for v in 0..x {
            if rng.random_bool(attach_p) {
                let sign = sign_for(&mut rng, positive_p);
                b.add(v, x, sign);
            }
        }
    }
    b.connect(&mut rng, positive_p, |a, c| a >= forest_n || c >= forest_n)?;
    Ok((b.graph(), s))
}

/// Planted split partition: `clique` induces a complete graph, `independent`
/// an edgeless one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPartition {
    pub clique: Vec<usize>,
    pub independent: Vec<usize>,
}

/// Planted partition into independent sets and cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlPartition {
    pub independent: Vec<Vec<usize>>,
    pub cliques: Vec<Vec<usize>>,
}

impl From<SplitPartition> for RlPartition {
    fn from(p: SplitPartition) -> RlPartition {
        RlPartition { independent: vec![p.independent], cliques: vec![p.clique] }
    }
}

fn structure(msg: String) -> GenError {
    GenError::Structure(msg)
}

pub fn verify_rl(g: &SignedGraph, p: &RlPartition) -> Result<(), GenError> {
    let mut owner = vec![None; g.n()];
    for part in p.independent.iter().chain(&p.cliques) {
        for &v in part {
            if v >= g.n() {
                return Err(structure(format!("vertex {v} out of range")));
            }
            if owner[v].replace(()).is_some() {
                return Err(structure(format!("vertex {v} appears in two parts")));
            }
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(structure(format!("vertex {v} is in no part")));
    }
    for set in &p.independent {
        for (i, &a) in set.iter().enumerate() {
            if let Some(&b) = set[i + 1..].iter().find(|&&b| g.adjacent(a, b)) {
                return Err(structure(format!("independent set contains edge {a}-{b}")));
            }
        }
    }
    for clique in &p.cliques {
        for (i, &a) in clique.iter().enumerate() {
            if let Some(&b) = clique[i + 1..].iter().find(|&&b| !g.adjacent(a, b)) {
                return Err(structure(format!("clique misses edge {a}-{b}")));
            }
        }
    }
    Ok(())
}

pub fn verify_split(g: &SignedGraph, p: &SplitPartition) -> Result<(), GenError> {
    verify_rl(g, &RlPartition::from(p.clone()))
}

/// Split partition where every independent vertex has degree at most `d` and
/// every clique vertex has a neighbour in the independent side.
pub fn verify_dsplit(g: &SignedGraph, p: &SplitPartition, d: usize) -> Result<(), GenError> {
    verify_split(g, p)?;
    if let Some(&v) = p.independent.iter().find(|&&v| g.degree(v) > d) {
        return Err(structure(format!("independent vertex {v} has degree {} > {d}", g.degree(v))));
    }
    let mut in_i = vec![false; g.n()];
    for &v in &p.independent {
        in_i[v] = true;
    }
    if let Some(&v) = p.clique.iter().find(|&&v| !g.neighbors(v).iter().any(|&w| in_i[w])) {
        return Err(structure(format!("clique vertex {v} has no independent neighbour")));
    }
    Ok(())
}

/// Random split graph: clique `0..k_size`, independent `k_size..`. Each
/// independent vertex joins each clique vertex with probability `edge_p`
/// and keeps at least one clique neighbour.
pub fn gen_split(
    k_size: usize,
    i_size: usize,
    edge_p: f64,
    positive_p: f64,
    seed: u64,
) -> Result<(SignedGraph, SplitPartition), GenError> {
    check_prob("edge_p", edge_p)?;
    check_prob("positive_p", positive_p)?;
    if k_size == 0 && i_size > 1 {
        return Err(GenError::Infeasible("an edgeless split graph on two or more vertices is disconnected".into()));
    }
    let mut rng = seeded(seed);
    let n = k_size + i_size;
    let mut b = Builder::new(n);
    for u in 0..k_size {
        for v in u + 1..k_size {
            let s = sign_for(&mut rng, positive_p);
            b.add(u, v, s);
        }
    }
    for x in k_size..n {
        for c in 0..k_size {
            if rng.random_bool(edge_p) {
                let s = sign_for(&mut rng, positive_p);
                b.add(x, c, s);
            }
        }
        if k_size > 0 && (0..k_size).all(|c| !b.has(x, c)) {
            let c = rng.random_range(0..k_size);
            let s = sign_for(&mut rng, positive_p);
            b.add(x, c, s);
        }
    }
    let part = SplitPartition { clique: (0..k_size).collect(), independent: (k_size..n).collect() };
    Ok((b.graph(), part))
}

/// Random graph with a planted partition into independent sets of the given
/// sizes followed by cliques of the given sizes. Vertices are numbered part
/// by part. Cross-part pairs are edges with probability `edge_p`.
pub fn gen_rl(
    independent_sizes: &[usize],
    clique_sizes: &[usize],
    edge_p: f64,
    positive_p: f64,
    seed: u64,
) -> Result<(SignedGraph, RlPartition), GenError> {
    check_prob("edge_p", edge_p)?;
    check_prob("positive_p", positive_p)?;
    let mut part_of = Vec::new();
    let mut partition = RlPartition { independent: Vec::new(), cliques: Vec::new() };
    for (i, &size) in independent_sizes.iter().chain(clique_sizes).enumerate() {
        let start = part_of.len();
        part_of.extend(std::iter::repeat_n(i, size));
        let members: Vec<usize> = (start..part_of.len()).collect();
        if i < independent_sizes.len() {
            partition.independent.push(members);
        } else {
            partition.cliques.push(members);
        }
    }
    let n = part_of.len();
    if n == 0 {
        return Err(GenError::Infeasible("all parts are empty".into()));
    }
    let is_clique = |v: usize| part_of[v] >= independent_sizes.len();
    let mut rng = seeded(seed);
    let mut b = Builder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let same = part_of[u] == part_of[v];
            if (same && is_clique(u)) || (!same && rng.random_bool(edge_p)) {
                let s = sign_for(&mut rng, positive_p);
                b.add(u, v, s);
            }
        }
    }
    b.connect(&mut rng, positive_p, |u, v| part_of[u] != part_of[v])?;
    Ok((b.graph(), partition))
}

/// Random `d*`-split graph: clique `0..k_size` with negative edges, then
/// `i_size` independent vertices with between 1 and `d` clique neighbours
/// (positive with probability `positive_p`). Clique vertices left without
/// an independent neighbour get a fresh pendant, so `|I|` may grow.
pub fn gen_dsplit(
    d: usize,
    k_size: usize,
    i_size: usize,
    positive_p: f64,
    seed: u64,
) -> Result<(SignedGraph, SplitPartition), GenError> {
    check_prob("positive_p", positive_p)?;
    if d == 0 {
        return Err(GenError::InvalidParameter("d must be at least 1".into()));
    }
    if k_size == 0 {
        return Err(GenError::InvalidParameter("the clique side must be non-empty".into()));
    }
    let mut rng = seeded(seed);
    let clique: Vec<usize> = (0..k_size).collect();
    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    for u in 0..k_size {
        for v in u + 1..k_size {
            edges.push((u, v, Sign::Negative));
        }
    }
    let mut covered = vec![false; k_size];
    let mut next = k_size;
    for _ in 0..i_size {
        let deg = rng.random_range(1..=d.min(k_size));
        for &c in clique.choose_multiple(&mut rng, deg) {
            covered[c] = true;
            edges.push((c, next, sign_for(&mut rng, positive_p)));
        }
        next += 1;
    }
    for (c, _) in covered.iter().enumerate().filter(|(_, &hit)| !hit) {
        edges.push((c, next, sign_for(&mut rng, positive_p)));
        next += 1;
    }
    let g = SignedGraph::from_edges(next, edges).expect("generated edges are simple");
    Ok((g, SplitPartition { clique, independent: (k_size..next).collect() }))
}

/// Two disjoint copies of `g`.
pub fn transform_double(g: &SignedGraph) -> SignedGraph {
    g.disjoint_union(g)
}

/// Turns `g` (signs ignored) into an all-negative split graph `H`: the
/// vertices of `g` become a clique and every non-adjacent pair `{v, w}`
/// gets a new vertex adjacent to exactly `v` and `w`. Non-edges are
/// numbered from `n` in lexicographic order. Requires that no vertex of `g`
/// is adjacent to all others.
pub fn transform_non_edge_split(g: &SignedGraph) -> Result<(SignedGraph, SplitPartition), GenError> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.neighbors(v).len() + 1 == n) {
        return Err(GenError::UniversalVertex(v));
    }
    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, Sign::Negative));
        }
    }
    let mut next = n;
    for u in 0..n {
        for v in u + 1..n {
            if !g.adjacent(u, v) {
                edges.push((u, next, Sign::Negative));
                edges.push((v, next, Sign::Negative));
                next += 1;
            }
        }
    }
    let h = SignedGraph::from_edges(next, edges).expect("construction is simple");
    Ok((h, SplitPartition { clique: (0..n).collect(), independent: (n..next).collect() }))
}

/// Optimum for a `1*`-split graph with an all-negative clique: split the
/// clique as evenly as possible and put every pendant where its edge is
/// satisfied.
pub fn solve_1star_split(g: &SignedGraph, p: &SplitPartition) -> Result<(u64, Assignment), GenError> {
    verify_dsplit(g, p, 1)?;
    for (i, &a) in p.clique.iter().enumerate() {
        for &b in &p.clique[i + 1..] {
            if !g.has_edge(a, b, Sign::Negative) || g.has_edge(a, b, Sign::Positive) {
                return Err(structure(format!("clique edge {a}-{b} is not a single negative edge")));
            }
        }
    }
    let mut sides = vec![1u8; g.n()];
    let half = p.clique.len() / 2;
    for &v in &p.clique[half..] {
        sides[v] = 2;
    }
    let mut satisfied = 0u64;
    for &x in &p.independent {
        if let Some(&(c, sign)) = g.incident(x).first() {
            sides[x] = if sign.is_negative() { 3 - sides[c] } else { sides[c] };
            satisfied += 1;
        }
    }
    let q = p.clique.len() as u64;
    let a = half as u64;
    let value = a * (q - a) + satisfied;
    Ok((value, Assignment::from_sides(sides).expect("sides are 1 or 2")))
}

/// Generator parameters, one variant per family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GenSpec {
    NegativeClique {
        n: usize,
    },
    RandomSigned {
        n: usize,
        edge_p: f64,
        positive_p: f64,
        seed: u64,
    },
    Split {
        k_size: usize,
        i_size: usize,
        edge_p: f64,
        positive_p: f64,
        seed: u64,
    },
    Rl {
        independent_sizes: Vec<usize>,
        clique_sizes: Vec<usize>,
        edge_p: f64,
        positive_p: f64,
        seed: u64,
    },
    Dsplit {
        d: usize,
        k_size: usize,
        i_size: usize,
        positive_p: f64,
        seed: u64,
    },
    /// Two copies of a random connected all-negative graph.
    Double {
        n: usize,
        edge_p: f64,
        seed: u64,
    },
    /// The split transform applied to a random connected all-negative
    /// graph, doubled first if it has a universal vertex.
    NonEdgeSplit {
        n: usize,
        edge_p: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Partition {
    Split(SplitPartition),
    Rl(RlPartition),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: SignedGraph,
    pub partition: Option<Partition>,
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    let plain = |graph| Generated { graph, partition: None };
    match spec {
        GenSpec::NegativeClique { n } => gen_negative_clique(*n).map(plain),
        GenSpec::RandomSigned { n, edge_p, positive_p, seed } => {
            random_signed_graph(*n, *edge_p, *positive_p, *seed).map(plain)
        }
        GenSpec::Split { k_size, i_size, edge_p, positive_p, seed } => {
            let (graph, p) = gen_split(*k_size, *i_size, *edge_p, *positive_p, *seed)?;
            Ok(Generated { graph, partition: Some(Partition::Split(p)) })
        }
        GenSpec::Rl { independent_sizes, clique_sizes, edge_p, positive_p, seed } => {
            let (graph, p) = gen_rl(independent_sizes, clique_sizes, *edge_p, *positive_p, *seed)?;
            Ok(Generated { graph, partition: Some(Partition::Rl(p)) })
        }
        GenSpec::Dsplit { d, k_size, i_size, positive_p, seed } => {
            let (graph, p) = gen_dsplit(*d, *k_size, *i_size, *positive_p, *seed)?;
            Ok(Generated { graph, partition: Some(Partition::Split(p)) })
        }
        GenSpec::Double { n, edge_p, seed } => {
            Ok(plain(transform_double(&random_signed_graph(*n, *edge_p, 0.0, *seed)?)))
        }
        GenSpec::NonEdgeSplit { n, edge_p, seed } => {
            let base = random_signed_graph(*n, *edge_p, 0.0, *seed)?;
            let base = if (0..base.n()).any(|v| base.neighbors(v).len() + 1 == base.n()) {
                transform_double(&base)
            } else {
                base
            };
            let (graph, p) = transform_non_edge_split(&base)?;
            Ok(Generated { graph, partition: Some(Partition::Split(p)) })
        }
    }
}
