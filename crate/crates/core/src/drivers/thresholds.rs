//! Yes-thresholds and bookkeeping bounds evaluated on a reduced context.

use serde::{Deserialize, Serialize};

use crate::rules::RuleContext;

/// Structural counts of `G - S` on a reduced instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub non_path_blocks: usize,
    pub path_vertices: usize,
    /// Exterior vertices of non-path blocks.
    pub exterior_vertices: usize,
    /// Sum over blocks `C` of `|N(C_int) ∩ S|`.
    pub interior_attachment: usize,
    /// Path vertices lying in components of the path-vertex forest with at
    /// least three vertices.
    pub long_path_vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Meeting the threshold proves a yes-instance.
    Yes,
    /// Informational upper bound expected on reduced instances.
    Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub kind: CheckKind,
    pub threshold: i64,
    pub observed: i64,
    /// For [`CheckKind::Yes`]: the threshold fired. For
    /// [`CheckKind::Bound`]: the observed value exceeds the bound.
    pub triggered: bool,
}

impl BoundCheck {
    fn bound(name: &str, threshold: i64, observed: i64) -> BoundCheck {
        BoundCheck { name: name.into(), kind: CheckKind::Bound, threshold, observed, triggered: observed > threshold }
    }
}

pub fn counters(ctx: &RuleContext) -> Counters {
    let dec = ctx.blocks();
    let mut c = Counters { path_vertices: dec.path_vertices.len(), ..Counters::default() };
    for (_, b) in dec.non_path_blocks() {
        c.non_path_blocks += 1;
        c.exterior_vertices += b.exterior.len();
    }
    c.interior_attachment = dec.blocks.iter().map(|b| ctx.s_attachment(&b.interior)).sum();
    let forest = ctx.graph().induced(&dec.path_vertices);
    c.long_path_vertices = forest.connected_components().iter().filter(|comp| comp.len() >= 3).map(Vec::len).sum();
    c
}

/// Fires when `S` is non-empty and the attachment sum reaches
/// `|S|(2|S| - 3 + 2k) + 1`.
pub fn check_interior_attachment_threshold(ctx: &RuleContext, counters: &Counters) -> BoundCheck {
    let s = ctx.modulator().len() as i64;
    let k = ctx.k();
    let threshold = s * (2 * s - 3 + 2 * k) + 1;
    let observed = counters.interior_attachment as i64;
    BoundCheck {
        name: "interior-attachment".into(),
        kind: CheckKind::Yes,
        threshold,
        observed,
        triggered: s > 0 && threshold >= 1 && observed >= threshold,
    }
}

/// Fires on the first block `C` with `S`-attachment `a >= 1` and
/// `|C| >= 2|C_ext| + a(2|S| + 2k + 1)`. When none fires, reports the block
/// closest to its threshold.
pub fn check_block_size_threshold(ctx: &RuleContext) -> BoundCheck {
    let s = ctx.modulator().len() as i64;
    let k = ctx.k();
    let mut best: Option<BoundCheck> = None;
    for b in &ctx.blocks().blocks {
        let a = ctx.s_attachment(&b.interior) as i64;
        let threshold = 2 * b.exterior.len() as i64 + a * (2 * s + 2 * k + 1);
        let observed = b.len() as i64;
        let check = BoundCheck {
            name: "block-size".into(),
            kind: CheckKind::Yes,
            threshold,
            observed,
            triggered: s > 0 && a >= 1 && threshold >= 1 && observed >= threshold,
        };
        if check.triggered {
            return check;
        }
        let closer = match &best {
            None => a >= 1,
            Some(prev) => a >= 1 && observed - threshold > prev.observed - prev.threshold,
        };
        if closer {
            best = Some(check);
        }
    }
    best.unwrap_or(BoundCheck {
        name: "block-size".into(),
        kind: CheckKind::Yes,
        threshold: 0,
        observed: 0,
        triggered: false,
    })
}

/// `576k² + 3k - 3`: at or above this many long-path vertices the slack
/// they contribute outweighs the component count.
pub fn path_budget(k: i64) -> i64 {
    576 * k * k + 3 * k - 3
}

pub fn check_path_vertex_budget(counters: &Counters, k: i64) -> BoundCheck {
    let threshold = path_budget(k);
    let observed = counters.long_path_vertices as i64;
    BoundCheck {
        name: "path-vertex-budget".into(),
        kind: CheckKind::Yes,
        threshold,
        observed,
        triggered: k >= 1 && observed >= threshold,
    }
}

/// Upper bounds expected on a reduced instance that no threshold fired on.
pub fn bookkeeping(ctx: &RuleContext, counters: &Counters) -> Vec<BoundCheck> {
    let k = ctx.k();
    let mut out = vec![
        BoundCheck::bound("interior-attachment-sum", 3 * k * (8 * k - 3), counters.interior_attachment as i64),
        BoundCheck::bound("non-path-blocks", 6 * k * (8 * k - 3), counters.non_path_blocks as i64),
        BoundCheck::bound("non-path-exterior-vertices", 12 * k * (8 * k - 3), counters.exterior_vertices as i64),
    ];
    let oversized = ctx
        .blocks()
        .blocks
        .iter()
        .filter(|b| {
            let a = ctx.s_attachment(&b.interior) as i64;
            b.len() as i64 > 2 * b.exterior.len() as i64 + a * (8 * k + 1)
        })
        .count();
    out.push(BoundCheck::bound("blocks-over-size-bound", 0, oversized as i64));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Instance, Sign, SignedGraph};
    use crate::oracle::answer_exact;

    fn ctx(g: SignedGraph, s: &[usize], k: i64) -> RuleContext {
        RuleContext::new(Instance::new(g, k), s).unwrap()
    }

    #[test]
    fn empty_s_never_triggers() {
        let c = ctx(SignedGraph::complete(5, Sign::Negative), &[], 1);
        let counts = counters(&c);
        let att = check_interior_attachment_threshold(&c, &counts);
        assert_eq!((att.threshold, att.observed, att.triggered), (1, 0, false));
        assert!(!check_block_size_threshold(&c).triggered);
    }

    #[test]
    fn path_budget_values() {
        assert_eq!(path_budget(1), 576);
        let mut c = Counters { long_path_vertices: 575, ..Counters::default() };
        assert!(!check_path_vertex_budget(&c, 1).triggered);
        c.long_path_vertices = 576;
        assert!(check_path_vertex_budget(&c, 1).triggered);
        assert!(!check_path_vertex_budget(&Counters::default(), 2).triggered);
    }

    #[test]
    fn attachment_threshold_on_a_star() {
        // Star centre 0 with leaves 1..=6, every leaf sees S = {7, 8, 9}.
        let n = Sign::Negative;
        let mut edges: Vec<_> = (1..=6).map(|l| (0, l, n)).collect();
        edges.extend((1..=6).flat_map(|l| (7..10).map(move |s| (l, s, n))));
        let g = SignedGraph::from_edges(10, edges).unwrap();
        let c = ctx(g.clone(), &[7, 8, 9], 1);
        let check = check_interior_attachment_threshold(&c, &counters(&c));
        assert_eq!((check.threshold, check.observed, check.triggered), (16, 18, true));
        assert!(answer_exact(&g, 1).unwrap());
    }

    #[test]
    fn block_size_threshold_on_a_clique() {
        // Negative K5 with one vertex attached to S = {5}.
        let mut edges: Vec<_> =
            SignedGraph::complete(5, Sign::Negative).edges().iter().map(|e| (e.u, e.v, e.sign)).collect();
        edges.push((0, 5, Sign::Negative));
        let g = SignedGraph::from_edges(6, edges).unwrap();
        let c = ctx(g.clone(), &[5], 1);
        let check = check_block_size_threshold(&c);
        assert_eq!((check.threshold, check.observed, check.triggered), (5, 5, true));
        assert!(answer_exact(&g, 1).unwrap());
        let k5 = ctx(SignedGraph::complete(5, Sign::Negative), &[], 1);
        assert!(!check_block_size_threshold(&k5).triggered);
    }

    #[test]
    fn path_vertices_are_counted() {
        // Path 0-1-2-3-4-5-6: vertices 2, 3, 4 are path vertices.
        let g = SignedGraph::from_edges(7, (0..6).map(|i| (i, i + 1, Sign::Negative))).unwrap();
        let counts = counters(&ctx(g, &[], 1));
        assert_eq!(counts.path_vertices, 3);
        assert_eq!(counts.long_path_vertices, 3);
        assert_eq!(counts.non_path_blocks, 2);
    }
}
