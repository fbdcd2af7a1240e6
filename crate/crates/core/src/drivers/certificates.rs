//! Yes-certificates for large `d*`-split graphs, built from star deletions
//! and pendant removals on a planted partition `(K, I)`.

use serde::Serialize;

use crate::decompose::{apply_rule6plus, apply_rule_a};
use crate::error::DriverError;
use crate::gen::{verify_dsplit, SplitPartition};
use crate::graph::{Instance, SignedGraph};
use crate::trace::{Applied, RuleTrace};

/// Current instance plus the partition, in original ids.
struct Tracker {
    inst: Instance,
    /// Original id -> current id.
    cur: Vec<Option<usize>>,
    trace: RuleTrace,
}

impl Tracker {
    fn new(inst: &Instance) -> Tracker {
        Tracker { inst: inst.clone(), cur: (0..inst.graph.n()).map(Some).collect(), trace: RuleTrace::default() }
    }

    fn g(&self) -> &SignedGraph {
        &self.inst.graph
    }

    fn alive(&self, v: usize) -> bool {
        self.cur[v].is_some()
    }

    fn id(&self, v: usize) -> usize {
        self.cur[v].expect("vertex is alive")
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.g().adjacent(self.id(a), self.id(b))
    }

    /// Alive members of `set` adjacent to `v`, original ids.
    fn neighbours_in(&self, v: usize, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&w| self.alive(w) && self.adjacent(v, w)).collect()
    }

    fn record(&mut self, applied: Applied) {
        for slot in self.cur.iter_mut() {
            *slot = slot.and_then(|c| applied.map[c]);
        }
        self.trace.push(applied.step);
        self.inst = applied.instance;
    }

    fn star(&mut self, v: usize, leaves: &[usize]) -> Result<(), DriverError> {
        let ids: Vec<usize> = leaves.iter().map(|&u| self.id(u)).collect();
        let applied = apply_rule6plus(&self.inst, self.id(v), &ids).map_err(|e| self.fail(e.to_string()))?;
        self.record(applied);
        Ok(())
    }

    fn fail(&self, reason: String) -> DriverError {
        DriverError::Certificate { reason, state: Some(self.inst.graph.clone()) }
    }
}

fn check_partition(inst: &Instance, p: &SplitPartition, d: usize) -> Result<(), DriverError> {
    verify_dsplit(&inst.graph, p, d).map_err(|e| DriverError::Partition(e.to_string()))?;
    if !inst.graph.is_connected() {
        return Err(DriverError::Precondition("graph is not connected".into()));
    }
    Ok(())
}

/// Certificate for `|K| >= (d+1)k`: stars around clique vertices with two
/// or more independent neighbours, then pendant removal alternating with
/// deletion of a clique vertex, its single independent neighbour `u` and a
/// clique vertex not adjacent to `u`. Stops as soon as `k <= 0`.
pub fn certificate_clique_side(inst: &Instance, p: &SplitPartition, d: usize) -> Result<RuleTrace, DriverError> {
    check_partition(inst, p, d)?;
    let needed = (d as i64 + 1) * inst.k;
    if (p.clique.len() as i64) < needed {
        return Err(DriverError::Precondition(format!("|K| = {} < (d+1)k = {needed}", p.clique.len())));
    }
    let mut t = Tracker::new(inst);
    let done = |t: &Tracker| t.inst.k <= 0;

    loop {
        if done(&t) {
            return Ok(t.trace);
        }
        let pick = p.clique.iter().copied().filter(|&v| t.alive(v)).find_map(|v| {
            let nb = t.neighbours_in(v, &p.independent);
            (nb.len() >= 2).then_some((v, nb))
        });
        let Some((v, nb)) = pick else { break };
        t.star(v, &nb)?;
    }
    loop {
        while !done(&t) && t.g().n() >= 2 {
            let Some(v) = (0..t.g().n()).find(|&v| t.g().degree(v) == 1) else { break };
            let applied = apply_rule_a(&t.inst, v).map_err(|e| t.fail(e.to_string()))?;
            t.record(applied);
        }
        if done(&t) {
            return Ok(t.trace);
        }
        let pick =
            p.clique.iter().copied().filter(|&v| t.alive(v)).find_map(
                |v| match t.neighbours_in(v, &p.independent)[..] {
                    [u] => Some((v, u)),
                    _ => None,
                },
            );
        let Some((v, u)) = pick else { break };
        let w = p
            .clique
            .iter()
            .copied()
            .find(|&w| w != v && t.alive(w) && !t.adjacent(w, u))
            .ok_or_else(|| t.fail(format!("no clique vertex is non-adjacent to {u}")))?;
        t.star(v, &[u, w])?;
    }
    Err(t.fail(format!("procedure stopped with k = {}", t.inst.k)))
}

/// Bookkeeping of one round of [`certificate_independent_side`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub centre: usize,
    /// Number of leaves of the star.
    pub leaves: usize,
    pub dropped_clique: usize,
    pub dropped_independent: usize,
    pub independent_shrink: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentCertificate {
    pub trace: RuleTrace,
    pub rounds: Vec<Round>,
}

/// Certificate for `|I_h| >= 2dk`, where `K_h` are the clique vertices with
/// at least two independent neighbours and `I_h = N_I(K_h)`. Each round
/// deletes a star around some `v ∈ K_h^i` with leaves `N^i`, then discards
/// the clique vertices left with fewer than two independent neighbours and
/// the independent vertices they still see.
pub fn certificate_independent_side(
    inst: &Instance,
    p: &SplitPartition,
    d: usize,
) -> Result<IndependentCertificate, DriverError> {
    check_partition(inst, p, d)?;
    let g = &inst.graph;
    let mut heavy: Vec<usize> = p
        .clique
        .iter()
        .copied()
        .filter(|&v| p.independent.iter().filter(|&&w| g.adjacent(v, w)).count() >= 2)
        .collect();
    let mut reach: Vec<usize> =
        p.independent.iter().copied().filter(|&w| heavy.iter().any(|&v| g.adjacent(v, w))).collect();
    let needed = 2 * d as i64 * inst.k;
    if (reach.len() as i64) < needed {
        return Err(DriverError::Precondition(format!("|I_h| = {} < 2dk = {needed}", reach.len())));
    }
    let mut t = Tracker::new(inst);
    let mut rounds = Vec::new();
    while t.inst.k > 0 && !reach.is_empty() {
        let Some(&v) = heavy.first() else {
            return Err(t.fail("K_h is empty while I_h is not".into()));
        };
        let leaves: Vec<usize> = t.neighbours_in(v, &reach);
        if leaves.len() < 2 {
            return Err(t.fail(format!("centre {v} has {} neighbours in I_h", leaves.len())));
        }
        t.star(v, &leaves)?;
        let rest: Vec<usize> = reach.iter().copied().filter(|w| !leaves.contains(w)).collect();
        // Adjacency is read on the input graph: the sets only hold
        // vertices that are still present.
        let stale_clique: Vec<usize> = heavy
            .iter()
            .copied()
            .filter(|&x| x != v && rest.iter().filter(|&&w| g.adjacent(x, w)).count() <= 1)
            .collect();
        let stale_independent: Vec<usize> =
            rest.iter().copied().filter(|&w| stale_clique.iter().any(|&x| g.adjacent(x, w))).collect();
        let c = leaves.len();
        if stale_clique.len() > (d - 1) * c {
            return Err(t.fail(format!("|D_K| = {} > (d-1)c = {}", stale_clique.len(), (d - 1) * c)));
        }
        let next_heavy: Vec<usize> = heavy
            .iter()
            .copied()
            .filter(|&x| x != v && !stale_clique.contains(&x) && !stale_independent.iter().any(|&w| g.adjacent(x, w)))
            .collect();
        let next_reach: Vec<usize> = rest.iter().copied().filter(|w| !stale_independent.contains(w)).collect();
        let shrink = reach.len() - next_reach.len();
        if shrink > d * c {
            return Err(t.fail(format!("I_h shrank by {shrink} > dc = {}", d * c)));
        }
        if let Some(&x) = next_heavy.iter().find(|&&x| next_reach.iter().filter(|&&w| g.adjacent(x, w)).count() < 2) {
            return Err(t.fail(format!("{x} kept in K_h with fewer than two neighbours in I_h")));
        }
        rounds.push(Round {
            centre: v,
            leaves: c,
            dropped_clique: stale_clique.len(),
            dropped_independent: stale_independent.len(),
            independent_shrink: shrink,
        });
        heavy = next_heavy;
        reach = next_reach;
    }
    if t.inst.k > 0 {
        return Err(t.fail(format!("procedure stopped with k = {}", t.inst.k)));
    }
    Ok(IndependentCertificate { trace: t.trace, rounds })
}
