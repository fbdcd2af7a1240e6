//! Two-way reduction rules relative to a fixed modulator `S`.
//!
//! Every rule here expects `G - S` to be a clique-forest with only negative
//! edges and keeps it that way. `S` itself is never modified; its ids are
//! carried through the vertex renumbering of each step.

use serde::Serialize;

use crate::blocks::{block_decomposition, is_negative_clique_forest, Block, BlockDecomposition};
use crate::error::RuleError;
use crate::graph::{Edge, Instance, Sign, SignedGraph};
use crate::mcwv::mcwv_cliqueforest;
use crate::oracle::pt;
use crate::trace::{GraphEdit, Justification, RuleId, RuleStep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleContext {
    inst: Instance,
    s: Vec<usize>,
    in_s: Vec<bool>,
    blocks: BlockDecomposition,
}

impl RuleContext {
    /// Fails unless `G` is connected, has no opposite-sign pair and `G - S`
    /// is a negative clique-forest. With an opposite pair the lower bound
    /// itself fails (`β = 1 < 5/4 = pt` on two vertices) and the rules lose
    /// their validity.
    pub fn new(inst: Instance, s: &[usize]) -> Result<RuleContext, RuleError> {
        let ctx = RuleContext::build(inst, s);
        ctx.check(None)?;
        Ok(ctx)
    }

    fn build(inst: Instance, s: &[usize]) -> RuleContext {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        let mut in_s = vec![false; inst.graph.n()];
        for &v in &s {
            if v < in_s.len() {
                in_s[v] = true;
            }
        }
        let blocks = block_decomposition(&inst.graph, &s);
        RuleContext { inst, s, in_s, blocks }
    }

    fn check(&self, rule: Option<RuleId>) -> Result<(), RuleError> {
        let g = &self.inst.graph;
        let fail = |reason: String| match rule {
            Some(rule) => RuleError::Invariant { rule, reason },
            None => RuleError::Oracle(crate::error::OracleError::Invalid(reason)),
        };
        if let Some(&v) = self.s.iter().find(|&&v| v >= g.n()) {
            return Err(fail(format!("S contains {v}, graph has {} vertices", g.n())));
        }
        if g.n() == 0 || !g.is_connected() {
            return Err(fail("graph is empty or disconnected".into()));
        }
        if g.has_opposite_pair() {
            return Err(fail("graph has an opposite-sign pair of edges".into()));
        }
        if !is_negative_clique_forest(&g.without(&self.s).0) {
            return Err(fail("G - S is not a negative clique-forest".into()));
        }
        Ok(())
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.inst.graph
    }

    pub fn k(&self) -> i64 {
        self.inst.k
    }

    pub fn modulator(&self) -> &[usize] {
        &self.s
    }

    pub fn in_s(&self, v: usize) -> bool {
        self.in_s[v]
    }

    pub fn blocks(&self) -> &BlockDecomposition {
        &self.blocks
    }

    pub fn into_instance(self) -> Instance {
        self.inst
    }

    /// `N^+(v) ∩ S` and `N^-(v) ∩ S`.
    pub fn s_signature(&self, v: usize) -> (Vec<usize>, Vec<usize>) {
        let g = &self.inst.graph;
        let pick = |sign| g.signed_neighbors(v, sign).into_iter().filter(|&w| self.in_s[w]).collect();
        (pick(Sign::Positive), pick(Sign::Negative))
    }

    /// `|N(X) ∩ S|`, counting each vertex of `S` once.
    pub fn s_attachment(&self, x: &[usize]) -> usize {
        let mut hit = vec![false; self.inst.graph.n()];
        let mut count = 0;
        for &v in x {
            for w in self.inst.graph.neighbors(v) {
                if self.in_s[w] && !hit[w] {
                    hit[w] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Components of `G - S`, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.inst.graph.components_avoiding(&self.s)
    }

    fn find_block(&self, rule: RuleId, c: &[usize]) -> Result<&Block, RuleError> {
        let mut c = c.to_vec();
        c.sort_unstable();
        self.blocks
            .blocks
            .iter()
            .find(|b| b.vertices == c)
            .ok_or_else(|| RuleError::not_applicable(rule, "C is not a block of G - S"))
    }

    /// Applies `edit`, carries `S` through the renumbering and re-checks
    /// the invariants.
    fn step(
        &self,
        rule: RuleId,
        edit: GraphEdit,
        delta_k: i64,
        justification: Option<Justification>,
    ) -> Result<(RuleContext, RuleStep), RuleError> {
        let (graph, map) = edit.apply(&self.inst.graph)?;
        let s: Vec<usize> = self.s.iter().filter_map(|&v| map[v]).collect();
        if s.len() != self.s.len() {
            return Err(RuleError::Invariant { rule, reason: "a member of S was deleted".into() });
        }
        let next = RuleContext::build(Instance::new(graph, self.inst.k - delta_k), &s);
        next.check(Some(rule))?;
        Ok((next, RuleStep { rule, edit, delta_k, justification }))
    }
}

/// A rule instance found by [`applicable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Application {
    R8 { block: Vec<usize>, x: Vec<usize> },
    R9 { block: Vec<usize>, x: Vec<usize> },
    R10 { x: usize, y: usize, u: usize },
    R11 { component: Vec<usize>, s: usize },
}

impl Application {
    pub fn apply(&self, ctx: &RuleContext) -> Result<(RuleContext, RuleStep), RuleError> {
        match self {
            Application::R8 { block, x } => apply_rule8(ctx, block, x),
            Application::R9 { block, x } => apply_rule9(ctx, block, x),
            Application::R10 { x, y, u } => apply_rule10(ctx, *x, *y, *u),
            Application::R11 { component, s } => apply_rule11(ctx, component, *s),
        }
    }
}

fn sorted(x: &[usize]) -> Vec<usize> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    x
}

/// Deletes the two smallest vertices of `X`, a set of interior vertices of
/// `C` with identical signed `S`-neighbourhoods and
/// `|X| > (|C| + |N(X) ∩ S|) / 2 >= 1`. `k` is unchanged. The result must
/// keep at least one vertex.
pub fn apply_rule8(ctx: &RuleContext, c: &[usize], x: &[usize]) -> Result<(RuleContext, RuleStep), RuleError> {
    let rule = RuleId::R8;
    let block = ctx.find_block(rule, c)?;
    let x = sorted(x);
    if !x.iter().all(|v| block.interior.binary_search(v).is_ok()) {
        return Err(RuleError::not_applicable(rule, "X is not inside the interior of C"));
    }
    let Some(&first) = x.first() else {
        return Err(RuleError::not_applicable(rule, "X is empty"));
    };
    let sig = ctx.s_signature(first);
    if x.iter().any(|&v| ctx.s_signature(v) != sig) {
        return Err(RuleError::not_applicable(rule, "members of X have different S-neighbourhoods"));
    }
    let total = block.len() + ctx.s_attachment(&x);
    if 2 * x.len() <= total {
        return Err(RuleError::not_applicable(rule, "|X| <= (|C| + |N(X) ∩ S|) / 2"));
    }
    if total < 2 {
        return Err(RuleError::not_applicable(rule, "(|C| + |N(X) ∩ S|) / 2 < 1"));
    }
    if ctx.graph().n() <= 2 {
        return Err(RuleError::not_applicable(rule, "result would be empty"));
    }
    ctx.step(rule, GraphEdit::delete(x[..2].to_vec()), 0, None)
}

/// Deletes the smallest vertex of `X`, where `|C|` is even, `X` is a set of
/// `|C| / 2` interior vertices with no neighbour in `S`. `k` drops by one.
pub fn apply_rule9(ctx: &RuleContext, c: &[usize], x: &[usize]) -> Result<(RuleContext, RuleStep), RuleError> {
    let rule = RuleId::R9;
    let block = ctx.find_block(rule, c)?;
    let x = sorted(x);
    if block.len() % 2 != 0 {
        return Err(RuleError::not_applicable(rule, "|C| is odd"));
    }
    if x.len() != block.len() / 2 {
        return Err(RuleError::not_applicable(rule, "|X| != |C| / 2"));
    }
    if !x.iter().all(|v| block.interior.binary_search(v).is_ok()) {
        return Err(RuleError::not_applicable(rule, "X is not inside the interior of C"));
    }
    if ctx.s_attachment(&x) != 0 {
        return Err(RuleError::not_applicable(rule, "X has a neighbour in S"));
    }
    ctx.step(rule, GraphEdit::delete(vec![x[0]]), 1, None)
}

/// For a triangle block `{x, y, u}` with `N(u) = {x, y}`: if `xy` is a
/// bridge of `G - u`, contracts the block to a new vertex inheriting the
/// signed outside neighbourhood of `{x, y}` (`k` unchanged); otherwise
/// deletes `u` and the edge `xy` and lowers `k` by one.
pub fn apply_rule10(ctx: &RuleContext, x: usize, y: usize, u: usize) -> Result<(RuleContext, RuleStep), RuleError> {
    let g = ctx.graph();
    let rule = RuleId::R10a;
    if [x, y, u].iter().any(|&v| v >= g.n()) {
        return Err(RuleError::not_applicable(rule, "vertex out of range"));
    }
    ctx.find_block(rule, &[x, y, u])?;
    let mut xy = sorted(&[x, y]);
    if xy.len() != 2 || xy.contains(&u) {
        return Err(RuleError::not_applicable(rule, "x, y, u must be distinct"));
    }
    if g.neighbors(u) != xy {
        return Err(RuleError::not_applicable(rule, "N(u) != {x, y}"));
    }
    let (x, y) = (xy[0], xy[1]);
    let bridge_edges: Vec<Edge> = [Sign::Negative, Sign::Positive]
        .into_iter()
        .filter(|&s| g.has_edge(x, y, s))
        .map(|s| Edge::new(x, y, s))
        .collect();
    let minus_u = g.without_edges(&bridge_edges)?;
    let separated = minus_u.components_avoiding(&[u]).iter().all(|comp| !(comp.contains(&x) && comp.contains(&y)));
    if separated {
        let mut inherited: Vec<(usize, Sign)> = Vec::new();
        for sign in [Sign::Negative, Sign::Positive] {
            for w in g.boundary(&xy, sign) {
                if w != u {
                    inherited.push((w, sign));
                }
            }
        }
        xy.push(u);
        xy.sort_unstable();
        let edit = GraphEdit { add_vertex: Some(inherited), remove_vertices: xy, ..GraphEdit::default() };
        ctx.step(RuleId::R10a, edit, 0, None)
    } else {
        let edit = GraphEdit { remove_edges: bridge_edges, remove_vertices: vec![u], ..GraphEdit::default() };
        ctx.step(RuleId::R10b, edit, 1, None)
    }
}

/// Value `4β(G[T ∪ {s}]) - 4pt(G[T ∪ {s}])` for a component `T` of `G - S`
/// whose only neighbour in `S` is `s`, computed with the block-cut tree
/// dynamic program.
pub fn rule11_gain(ctx: &RuleContext, t: &[usize], s: usize) -> Result<(i64, Justification), RuleError> {
    let g = ctx.graph();
    let tree = g.induced(t);
    let pos = g.signed_neighbors(s, Sign::Positive);
    let neg = g.signed_neighbors(s, Sign::Negative);
    let w1: Vec<u64> = t.iter().map(|v| u64::from(pos.binary_search(v).is_ok())).collect();
    let w2: Vec<u64> = t.iter().map(|v| u64::from(neg.binary_search(v).is_ok())).collect();
    let beta = mcwv_cliqueforest(&tree, &w1, &w2)? as i64;
    let mut with_s = t.to_vec();
    with_s.push(s);
    with_s.sort_unstable();
    let p = pt(&g.induced(&with_s));
    Ok((4 * beta - p.0, Justification { beta, pt: p }))
}

/// Deletes a component `T` of `G - S` attached to `S` only through `s` and
/// lowers `k` by [`rule11_gain`].
pub fn apply_rule11(ctx: &RuleContext, t: &[usize], s: usize) -> Result<(RuleContext, RuleStep), RuleError> {
    let rule = RuleId::R11;
    let t = sorted(t);
    if s >= ctx.graph().n() || !ctx.in_s(s) {
        return Err(RuleError::not_applicable(rule, "s is not in S"));
    }
    if !ctx.components().contains(&t) {
        return Err(RuleError::not_applicable(rule, "T is not a component of G - S"));
    }
    let attached: Vec<usize> =
        (0..ctx.graph().n()).filter(|&w| ctx.in_s(w) && t.iter().any(|&v| ctx.graph().adjacent(v, w))).collect();
    if attached != [s] {
        return Err(RuleError::not_applicable(rule, "N(T) ∩ S != {s}"));
    }
    let (p, just) = rule11_gain(ctx, &t, s)?;
    ctx.step(rule, GraphEdit::delete(t), p, Some(just))
}

/// Interior vertices of a block grouped by signed `S`-neighbourhood, each
/// group ascending, groups ordered by smallest member.
fn signature_classes(ctx: &RuleContext, block: &Block) -> Vec<Vec<usize>> {
    type Signature = (Vec<usize>, Vec<usize>);
    let mut classes: Vec<(Signature, Vec<usize>)> = Vec::new();
    for &v in &block.interior {
        let sig = ctx.s_signature(v);
        match classes.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, members)) => members.push(v),
            None => classes.push((sig, vec![v])),
        }
    }
    classes.into_iter().map(|(_, m)| m).collect()
}

fn scan(ctx: &RuleContext, first_only: bool) -> Vec<Application> {
    let mut out = Vec::new();
    let g = ctx.graph();
    let blocks = &ctx.blocks().blocks;
    macro_rules! found {
        ($app:expr) => {{
            out.push($app);
            if first_only {
                return out;
            }
        }};
    }
    if g.n() > 2 {
        for b in blocks {
            for class in signature_classes(ctx, b) {
                let total = b.len() + ctx.s_attachment(&class);
                if 2 * class.len() > total && total >= 2 {
                    found!(Application::R8 { block: b.vertices.clone(), x: class });
                }
            }
        }
    }
    for b in blocks.iter().filter(|b| b.len() % 2 == 0) {
        for class in signature_classes(ctx, b) {
            if class.len() >= b.len() / 2 && ctx.s_attachment(&class[..1]) == 0 {
                found!(Application::R9 { block: b.vertices.clone(), x: class[..b.len() / 2].to_vec() });
            }
        }
    }
    for b in blocks.iter().filter(|b| b.len() == 3) {
        for &u in &b.vertices {
            let rest: Vec<usize> = b.vertices.iter().copied().filter(|&v| v != u).collect();
            if g.neighbors(u) == rest {
                found!(Application::R10 { x: rest[0], y: rest[1], u });
            }
        }
    }
    for comp in ctx.components() {
        let mut attached: Vec<usize> = comp.iter().flat_map(|&v| g.neighbors(v)).filter(|&w| ctx.in_s(w)).collect();
        attached.sort_unstable();
        attached.dedup();
        if let [s] = attached[..] {
            found!(Application::R11 { component: comp, s });
        }
    }
    out
}

/// Every rule instance available in `ctx`, in the fixed search order:
/// Rule 8, 9, 10, 11, each scanning blocks or components by smallest vertex.
pub fn applicable(ctx: &RuleContext) -> Vec<Application> {
    scan(ctx, false)
}

pub fn find_applicable(ctx: &RuleContext) -> Option<Application> {
    scan(ctx, true).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{Negative as N, Positive as P};
    use crate::oracle::{answer_exact, beta_exact};

    fn ctx(n: usize, edges: &[(usize, usize, Sign)], s: &[usize], k: i64) -> RuleContext {
        let g = SignedGraph::from_edges(n, edges.iter().copied()).unwrap();
        RuleContext::new(Instance::new(g, k), s).unwrap()
    }

    fn clique_edges(vs: &[usize]) -> Vec<(usize, usize, Sign)> {
        let mut e = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                e.push((a, b, N));
            }
        }
        e
    }

    fn equivalent(before: &RuleContext, after: &RuleContext) -> bool {
        let b = answer_exact(before.graph(), before.k()).unwrap();
        let a = after.k() <= 0 || answer_exact(after.graph(), after.k()).unwrap();
        a == b
    }

    #[test]
    fn rule8_k4_with_positive_s_neighbour() {
        // K4 on 0..4, s = 4 positively adjacent to 0, 1, 2.
        let mut e = clique_edges(&[0, 1, 2, 3]);
        e.extend([(0, 4, P), (1, 4, P), (2, 4, P)]);
        for k in 1..=4 {
            let c = ctx(5, &e, &[4], k);
            let (next, step) = apply_rule8(&c, &[0, 1, 2, 3], &[0, 1, 2]).unwrap();
            assert_eq!(step.edit.remove_vertices, vec![0, 1]);
            assert_eq!(next.k(), k);
            assert!(equivalent(&c, &next));
        }
    }

    #[test]
    fn rule8_k3_to_k1_and_not_applicable_on_k4_pairs() {
        let c = ctx(3, &clique_edges(&[0, 1, 2]), &[], 1);
        let (next, _) = apply_rule8(&c, &[0, 1, 2], &[0, 1, 2]).unwrap();
        assert_eq!(next.graph().n(), 1);
        let c4 = ctx(4, &clique_edges(&[0, 1, 2, 3]), &[], 1);
        assert!(matches!(apply_rule8(&c4, &[0, 1, 2, 3], &[0, 1]), Err(RuleError::NotApplicable { .. })));
    }

    #[test]
    fn rule9_examples() {
        // Path 0-1-2: block {0,1} has interior {0}.
        let c = ctx(3, &[(0, 1, N), (1, 2, N)], &[], 2);
        let (next, step) = apply_rule9(&c, &[0, 1], &[0]).unwrap();
        assert_eq!(step.delta_k, 1);
        assert_eq!(next.graph().n(), 2);
        assert!(equivalent(&c, &next));

        let mut e = clique_edges(&[0, 1, 2, 3]);
        e.push((2, 4, P));
        e.push((3, 4, N));
        let c = ctx(5, &e, &[4], 3);
        let (next, _) = apply_rule9(&c, &[0, 1, 2, 3], &[0, 1]).unwrap();
        assert!(equivalent(&c, &next));

        let c = ctx(3, &clique_edges(&[0, 1, 2]), &[], 1);
        assert!(apply_rule9(&c, &[0, 1, 2], &[0]).is_err());
    }

    #[test]
    fn rule10_bridge_branch() {
        // Leaf triangle {0,1,2} hanging from 0, which continues to 3-4 and s = 5.
        let mut e = clique_edges(&[0, 1, 2]);
        e.extend([(0, 3, N), (3, 4, N), (4, 5, P), (0, 5, P)]);
        let c = ctx(6, &e, &[5], 1);
        let (next, step) = apply_rule10(&c, 0, 1, 2).unwrap();
        assert_eq!(step.rule, RuleId::R10a);
        assert_eq!(next.graph().n(), 4);
        assert_eq!(next.k(), 1);
        for k in 1..=4 {
            let c = ctx(6, &e, &[5], k);
            assert!(equivalent(&c, &apply_rule10(&c, 0, 1, 2).unwrap().0));
        }
    }

    #[test]
    fn rule10_cycle_branch_and_rejection() {
        // Triangle {0,1,2} with u = 2; 0 and 1 both adjacent to s = 3.
        let mut e = clique_edges(&[0, 1, 2]);
        e.extend([(0, 3, N), (1, 3, P)]);
        for k in 1..=4 {
            let c = ctx(4, &e, &[3], k);
            let (next, step) = apply_rule10(&c, 0, 1, 2).unwrap();
            assert_eq!(step.rule, RuleId::R10b);
            assert_eq!(next.k(), k - 1);
            assert!(equivalent(&c, &next));
        }
        let c = ctx(4, &e, &[3], 1);
        assert!(apply_rule10(&c, 1, 2, 0).is_err());
    }

    #[test]
    fn rule11_examples() {
        let c = ctx(2, &[(0, 1, P)], &[0], 3);
        let (next, step) = apply_rule11(&c, &[1], 0).unwrap();
        assert_eq!(step.delta_k, 1);
        assert_eq!(next.graph().n(), 1);

        let c = ctx(3, &[(0, 1, P), (1, 2, N)], &[0], 3);
        assert_eq!(apply_rule11(&c, &[1, 2], 0).unwrap().1.delta_k, 2);

        let c = ctx(2, &[(0, 1, N)], &[0], 3);
        assert_eq!(apply_rule11(&c, &[1], 0).unwrap().1.delta_k, 1);
    }

    #[test]
    fn rule11_gain_matches_exhaustive() {
        // T = K3 plus pendant, s adjacent to one triangle vertex and the pendant.
        let mut e = clique_edges(&[1, 2, 3]);
        e.extend([(3, 4, N), (0, 1, P), (0, 4, P)]);
        let c = ctx(5, &e, &[0], 1);
        let (p, _) = rule11_gain(&c, &[1, 2, 3, 4], 0).unwrap();
        let g = c.graph();
        assert_eq!(p, 4 * beta_exact(g).unwrap().beta as i64 - pt(g).0);
    }

    #[test]
    fn opposite_pairs_are_rejected() {
        let g = SignedGraph::from_edges(3, [(0, 1, N), (0, 2, N), (0, 2, P)]).unwrap();
        assert!(RuleContext::new(Instance::new(g, 1), &[2]).is_err());
    }

    #[test]
    fn k5_first_application_is_rule8() {
        let c = ctx(5, &clique_edges(&[0, 1, 2, 3, 4]), &[], 1);
        assert_eq!(find_applicable(&c), Some(Application::R8 { block: vec![0, 1, 2, 3, 4], x: vec![0, 1, 2, 3, 4] }));
        let one = ctx(1, &[], &[], 1);
        assert_eq!(find_applicable(&one), None);
    }
}
