//! Blocks (2-connected components and bridges) of `G - S`, and the
//! interior/exterior/path/leaf classification built on them.

use serde::Serialize;

use crate::graph::SignedGraph;

/// One block of `G - S`. Isolated vertices of `G - S` form singleton blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    /// Members whose `G - S` neighbourhood lies inside the block.
    pub interior: Vec<usize>,
    pub exterior: Vec<usize>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn smallest(&self) -> usize {
        self.vertices[0]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Two vertices, both exterior.
    pub fn is_path_block(&self) -> bool {
        self.vertices.len() == 2 && self.exterior.len() == 2
    }

    pub fn is_leaf_block(&self) -> bool {
        self.exterior.len() <= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// The removed set `S`, ascending.
    pub removed: Vec<usize>,
    /// Blocks ordered by smallest member.
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
    /// Indices into `blocks`.
    pub path_blocks: Vec<usize>,
    pub path_vertices: Vec<usize>,
    pub leaf_blocks: Vec<usize>,
    /// For each vertex of `G`, the indices of the blocks containing it
    /// (empty for members of `S`).
    pub blocks_of: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn is_path_vertex(&self, v: usize) -> bool {
        self.path_vertices.binary_search(&v).is_ok()
    }

    pub fn non_path_blocks(&self) -> impl Iterator<Item = (usize, &Block)> {
        self.blocks.iter().enumerate().filter(|(_, b)| !b.is_path_block())
    }
}

/// Distinct-neighbour adjacency of `G - S`, signs ignored.
fn simple_adjacency(g: &SignedGraph, in_s: &[bool]) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|v| if in_s[v] { Vec::new() } else { g.neighbors(v).into_iter().filter(|&w| !in_s[w]).collect() })
        .collect()
}

/// Vertex sets of the biconnected components of a simple graph, found with
/// an iterative Hopcroft-Tarjan traversal. Vertices flagged in `skip` are
/// ignored; isolated vertices are returned as singletons.
pub(crate) fn biconnected_vertex_sets(adj: &[Vec<usize>], skip: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if skip[root] || disc[root] != UNSEEN {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = timer;
            timer += 1;
            out.push(vec![root]);
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent, next neighbour index)
        let mut stack = vec![(root, UNSEEN, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let w = adj[v][top.2];
                top.2 += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push((v, w));
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push((v, w));
                }
            } else {
                stack.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut comp = Vec::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            comp.push(a);
                            comp.push(b);
                            if (a, b) == (parent, v) {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comp.dedup();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Block decomposition of `G - S`. Neighbourhood tests ignore signs.
pub fn block_decomposition(g: &SignedGraph, s: &[usize]) -> BlockDecomposition {
    let n = g.n();
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    let adj = simple_adjacency(g, &in_s);
    let sets = biconnected_vertex_sets(&adj, &in_s);

    let mut blocks_of = vec![Vec::new(); n];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            blocks_of[v].push(i);
        }
    }
    let blocks: Vec<Block> = sets
        .into_iter()
        .map(|vertices| {
            let (interior, exterior) =
                vertices.iter().partition(|&&x| adj[x].iter().all(|w| vertices.binary_search(w).is_ok()));
            Block { vertices, interior, exterior }
        })
        .collect();

    let cut_vertices = (0..n).filter(|&v| blocks_of[v].len() >= 2).collect();
    let path_blocks: Vec<usize> =
        blocks.iter().enumerate().filter(|(_, b)| b.is_path_block()).map(|(i, _)| i).collect();
    let leaf_blocks = blocks.iter().enumerate().filter(|(_, b)| b.is_leaf_block()).map(|(i, _)| i).collect();
    let path_vertices = (0..n)
        .filter(|&v| !blocks_of[v].is_empty() && blocks_of[v].iter().all(|&b| blocks[b].is_path_block()))
        .collect();

    let mut removed = s.to_vec();
    removed.sort_unstable();
    removed.dedup();
    BlockDecomposition { removed, blocks, cut_vertices, path_blocks, path_vertices, leaf_blocks, blocks_of }
}

/// Whether every block induces a clique and every edge is negative.
pub fn is_negative_clique_forest(g: &SignedGraph) -> bool {
    if g.positive_edge_count() > 0 {
        return false;
    }
    all_blocks_are_cliques(g, &[])
}

/// Whether every block of `G - S` induces a clique (signs ignored).
pub fn all_blocks_are_cliques(g: &SignedGraph, s: &[usize]) -> bool {
    let dec = block_decomposition(g, s);
    dec.blocks
        .iter()
        .all(|b| b.vertices.iter().enumerate().all(|(i, &x)| b.vertices[i + 1..].iter().all(|&y| g.adjacent(x, y))))
}
