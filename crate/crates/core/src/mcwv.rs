//! Max Cut with Weighted Vertices on negative clique-forests, solved by a
//! dynamic program over the block-cut tree.
//!
//! For a vertex `v` let `best[v][side]` be the optimum of the part of the
//! forest hanging below `v` (including `v`'s own weight) when `v` sits on
//! `side`. A block with `q` vertices of which `a` are on side 1 cuts
//! `a * (q - a)` edges, so once the parent cut vertex is placed, filling a
//! block reduces to picking how many children go to side 1 and taking those
//! with the largest gain `best[c][1] - best[c][2]`.

use crate::blocks::{block_decomposition, is_negative_clique_forest};
use crate::error::OracleError;
use crate::graph::SignedGraph;

pub fn mcwv_cliqueforest(t: &SignedGraph, w1: &[u64], w2: &[u64]) -> Result<u64, OracleError> {
    let n = t.n();
    if w1.len() != n || w2.len() != n {
        return Err(OracleError::Invalid("weight vectors must have one entry per vertex".into()));
    }
    if !is_negative_clique_forest(t) {
        return Err(OracleError::NotCliqueForest);
    }
    let dec = block_decomposition(t, &[]);
    let nb = dec.blocks.len();

    // Root every component at its smallest vertex and orient the block-cut
    // tree: each block gets a parent vertex, each non-root vertex a parent block.
    let mut vertex_seen = vec![false; n];
    let mut block_seen = vec![false; nb];
    let mut block_parent = vec![usize::MAX; nb];
    // Vertices in the order they are reached; processed in reverse.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut child_blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for root in 0..n {
        if vertex_seen[root] {
            continue;
        }
        vertex_seen[root] = true;
        roots.push(root);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &b in &dec.blocks_of[v] {
                if block_seen[b] {
                    continue;
                }
                block_seen[b] = true;
                block_parent[b] = v;
                child_blocks[v].push(b);
                for &c in &dec.blocks[b].vertices {
                    if !vertex_seen[c] {
                        vertex_seen[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
    }

    // best[v] = [side 1, side 2]
    let mut best = vec![[0i64; 2]; n];
    for &v in order.iter().rev() {
        let mut acc = [w1[v] as i64, w2[v] as i64];
        for &b in &child_blocks[v] {
            let members = &dec.blocks[b].vertices;
            let q = members.len() as i64;
            let mut base = 0i64;
            let mut gains: Vec<i64> = Vec::with_capacity(members.len());
            for &c in members.iter().filter(|&&c| c != block_parent[b]) {
                base += best[c][1];
                gains.push(best[c][0] - best[c][1]);
            }
            gains.sort_unstable_by(|a, b| b.cmp(a));
            for (side, slot) in acc.iter_mut().enumerate() {
                let parent_on_one = i64::from(side == 0);
                let mut prefix = 0i64;
                let mut block_best = i64::MIN;
                for j in 0..=gains.len() {
                    if j > 0 {
                        prefix += gains[j - 1];
                    }
                    let a = j as i64 + parent_on_one;
                    block_best = block_best.max(base + prefix + a * (q - a));
                }
                *slot += block_best;
            }
        }
        best[v] = acc;
    }

    let total: i64 = roots.iter().map(|&r| best[r][0].max(best[r][1])).sum();
    Ok(total as u64)
}
