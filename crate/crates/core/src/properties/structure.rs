//! Connectivity, percolating-everywhere, cut-size and quotient checks.

use std::collections::BTreeMap;

use super::{PropertyKind, PropertyVerdict, Verdict};
use crate::error::{Error, Result};
use crate::graph::{
    bipartition_cut, Bipartition, EdgeId, LocalGraph, Subgraph, Topology, VertexId,
};
use crate::percolation::UnionFind;

/// A subgraph with no vertices counts as connected.
pub fn is_connected(sub: &Subgraph) -> bool {
    LocalGraph::new(sub).components().1 <= 1
}

/// Components of `sub` as vertex lists, ordered by smallest vertex.
pub fn components(sub: &Subgraph) -> Vec<Vec<VertexId>> {
    let lg = LocalGraph::new(sub);
    let (comp, count) = lg.components();
    let mut out = vec![Vec::new(); count];
    for (i, c) in comp.into_iter().enumerate() {
        out[c].push(lg.global(i));
    }
    out
}

/// `h` spans every vertex of `g` and each of its components reaches the boundary.
pub fn is_percolating_everywhere<T: Topology + ?Sized>(g: &T, h: &Subgraph) -> bool {
    h.vertex_count() == g.vertex_count()
        && components(h)
            .iter()
            .all(|c| c.iter().any(|&v| g.is_boundary(v)))
}

fn touches_boundary<T: Topology + ?Sized>(g: &T, side: &[VertexId]) -> bool {
    side.iter().any(|&v| g.is_boundary(v))
}

/// Smallest cut among the partitions whose sides both touch the boundary;
/// fails when that cut is below `threshold`. Evidence: the cut size of each
/// qualifying partition, in input order.
pub fn ti_check<T: Topology + ?Sized>(
    g: &T,
    partitions: &[Bipartition],
    threshold: usize,
) -> Result<PropertyVerdict> {
    let mut cuts = Vec::new();
    for part in partitions {
        part.check_for(g)?;
        let (a, b) = (part.side_a(), part.side_b());
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidPartition("one side is empty".into()));
        }
        if touches_boundary(g, &a) && touches_boundary(g, &b) {
            cuts.push(bipartition_cut(g, part)?.len());
        }
    }
    let window = g.window_radius();
    let evidence: Vec<f64> = cuts.iter().map(|&c| c as f64).collect();
    let verdict = match cuts.iter().min() {
        None => PropertyVerdict::new(PropertyKind::Ti, Verdict::Inconclusive, window)
            .with_reason("no_qualifying_partition"),
        Some(&m) if m < threshold => {
            PropertyVerdict::new(PropertyKind::Ti, Verdict::FailsAtScale, window)
        }
        Some(_) => PropertyVerdict::new(PropertyKind::Ti, Verdict::HoldsAtScale, window),
    };
    Ok(verdict.with_evidence(evidence))
}

/// Components of a spanning subgraph collapsed to single vertices, with the
/// number of host edges between each pair of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    class: Vec<usize>,
    class_count: usize,
    multi_edges: BTreeMap<(usize, usize), u64>,
}

impl QuotientGraph {
    pub fn class_of(&self, v: VertexId) -> usize {
        self.class[v]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn classes(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (v, &c) in self.class.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Keys `(c1, c2)` with `c1 < c2`.
    pub fn multi_edges(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.multi_edges
    }

    /// Symmetric; zero on the diagonal.
    pub fn edge_count(&self, c1: usize, c2: usize) -> u64 {
        let key = (c1.min(c2), c1.max(c2));
        self.multi_edges.get(&key).copied().unwrap_or(0)
    }
}

/// Classes are the components of `h`, numbered by smallest vertex.
pub fn quotient_graph<T: Topology + ?Sized>(g: &T, h: &Subgraph) -> Result<QuotientGraph> {
    if !is_percolating_everywhere(g, h) {
        return Err(Error::Precondition(
            "subgraph is not percolating everywhere".into(),
        ));
    }
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for e in h.edges() {
        uf.union(e.u, e.v);
    }
    let mut root_class = vec![usize::MAX; n];
    let mut class = vec![0; n];
    let mut class_count = 0;
    for v in 0..n {
        let r = uf.find(v);
        if root_class[r] == usize::MAX {
            root_class[r] = class_count;
            class_count += 1;
        }
        class[v] = root_class[r];
    }
    let mut multi_edges = BTreeMap::new();
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e).expect("dense edge ids");
        let (a, b) = (class[u], class[v]);
        if a != b {
            *multi_edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    Ok(QuotientGraph {
        class,
        class_count,
        multi_edges,
    })
}

/// `1 - (1 - p)^k` for the `k` host edges between two classes.
pub fn quotient_edge_prob(q: &QuotientGraph, c1: usize, c2: usize, p: f64) -> Result<f64> {
    if c1 >= q.class_count || c2 >= q.class_count {
        return Err(Error::InvalidParameter(format!("no class {}", c1.max(c2))));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let k = q.edge_count(c1, c2);
    Ok(if k == 0 {
        0.0
    } else {
        1.0 - (1.0 - p).powf(k as f64)
    })
}

/// Smallest sum of quotient edge probabilities across the ladder's class
/// bipartitions (`true` = side A). `+inf` for a single class.
pub fn kalikow_weiss_diagnostic(q: &QuotientGraph, p: f64, ladder: &[Vec<bool>]) -> Result<f64> {
    if q.class_count == 1 {
        return Ok(f64::INFINITY);
    }
    if ladder.is_empty() {
        return Err(Error::InvalidParameter("empty ladder".into()));
    }
    let mut best = f64::INFINITY;
    for side in ladder {
        if side.len() != q.class_count {
            return Err(Error::InvalidPartition(format!(
                "ladder entry covers {} classes, quotient has {}",
                side.len(),
                q.class_count
            )));
        }
        if side.iter().all(|&s| s) || side.iter().all(|&s| !s) {
            return Err(Error::InvalidPartition("one side is empty".into()));
        }
        let mut sum = 0.0;
        for &(a, b) in q.multi_edges.keys() {
            if side[a] != side[b] {
                sum += quotient_edge_prob(q, a, b, p)?;
            }
        }
        best = best.min(sum);
    }
    Ok(best)
}

/// Output of [`build_pe_counterexample`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeCounterexample {
    /// Every vertex, every edge except `removed`.
    pub h: Subgraph,
    /// The cut edges joining the component of `a0` in `G[A]` to the component
    /// of `b0` in `G` minus those edges, sorted.
    pub removed: Vec<EdgeId>,
}

/// Spanning subgraph with exactly two components, both reaching the boundary,
/// built by deleting the cut edges between `a0`'s side and `b0`'s side.
/// A cut with a boundary endpoint is treated as infinite and rejected.
pub fn build_pe_counterexample<T: Topology + ?Sized>(
    g: &T,
    a0: VertexId,
    b0: VertexId,
    part: &Bipartition,
) -> Result<PeCounterexample> {
    part.check_for(g)?;
    if !part.in_a(a0) || part.in_a(b0) {
        return Err(Error::Precondition("a0 must lie in A and b0 in B".into()));
    }
    let cut = bipartition_cut(g, part)?;
    if cut.iter().any(|&e| {
        let (u, v) = g.endpoints(e).expect("cut edge");
        g.is_boundary(u) || g.is_boundary(v)
    }) {
        return Err(Error::Precondition("cut not finite at this scale".into()));
    }
    let n = g.vertex_count();
    let reach = |from: VertexId, allowed: &dyn Fn(VertexId, EdgeId) -> bool| {
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut stack = vec![from];
        let mut nb = Vec::new();
        while let Some(x) = stack.pop() {
            nb.clear();
            g.neighbors_into(x, &mut nb);
            for &(y, e) in &nb {
                if !seen[y] && allowed(y, e) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let side_a = reach(a0, &|y, _| part.in_a(y));
    let side_b = reach(b0, &|y, _| !part.in_a(y));
    if !(0..n).any(|v| side_a[v] && g.is_boundary(v))
        || !(0..n).any(|v| side_b[v] && g.is_boundary(v))
    {
        return Err(Error::Precondition(
            "a0 or b0 does not reach the boundary on its side".into(),
        ));
    }
    let endpoint_in_a = |e: EdgeId| {
        let (u, v) = g.endpoints(e).expect("cut edge");
        if part.in_a(u) {
            (u, v)
        } else {
            (v, u)
        }
    };
    let e_a: Vec<EdgeId> = cut
        .iter()
        .copied()
        .filter(|&e| side_a[endpoint_in_a(e).0])
        .collect();
    let from_b0 = reach(b0, &|_, e| e_a.binary_search(&e).is_err());
    let removed: Vec<EdgeId> = e_a
        .into_iter()
        .filter(|&e| from_b0[endpoint_in_a(e).1])
        .collect();
    let h = Subgraph::new(
        g,
        (0..n).collect(),
        (0..g.edge_count()).filter(|e| removed.binary_search(e).is_err()),
    )?;
    let comps = components(&h);
    if comps.len() != 2 || !comps.iter().all(|c| touches_boundary(g, c)) {
        return Err(Error::Precondition(format!(
            "removal leaves {} components, not two boundary-reaching ones",
            comps.len()
        )));
    }
    Ok(PeCounterexample { h, removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        build_glued_trees, build_regular_tree, build_zd_box, subtree_split, Lattice, VertexLabel,
    };
    use approx::assert_relative_eq;

    #[test]
    fn connectivity_conventions() {
        let g = build_zd_box(1, 3).unwrap();
        assert!(is_connected(&Subgraph::empty()));
        assert!(is_connected(&Subgraph::single_vertex(&g, 2).unwrap()));
        assert!(!is_connected(&Subgraph::new(&g, vec![0, 6], []).unwrap()));
        assert!(is_connected(&g.whole()));
    }

    fn rows(g: &crate::graph::Graph, l: &Lattice) -> Subgraph {
        let horizontal = (0..g.edge_count()).filter(|&e| l.edge_axis(e) == 1);
        Subgraph::new(g, (0..g.vertex_count()).collect(), horizontal).unwrap()
    }

    #[test]
    fn percolating_everywhere() {
        let g = build_zd_box(2, 4).unwrap();
        assert!(is_percolating_everywhere(&g, &g.whole()));
        let missing = Subgraph::induced(&g, (1..g.vertex_count()).collect()).unwrap();
        assert!(!is_percolating_everywhere(&g, &missing));
        let l = Lattice::new(2, 4).unwrap();
        assert!(is_percolating_everywhere(&g, &rows(&g, &l)));
    }

    #[test]
    fn ti_examples() {
        for r in [4usize, 8, 16] {
            let g = build_zd_box(2, r).unwrap();
            let l = Lattice::new(2, r).unwrap();
            let ladder: Vec<Bipartition> = (-(r as i64) + 1..r as i64)
                .step_by(r / 2)
                .map(|c| Bipartition::from_predicate(g.vertex_count(), |v| l.coords(v)[0] < c))
                .collect();
            let v = ti_check(&g, &ladder, r).unwrap();
            assert_eq!(v.verdict, Verdict::HoldsAtScale);
            assert!(v.evidence.iter().all(|&c| c == (2 * r + 1) as f64));
        }
        let t = build_regular_tree(3, 6).unwrap();
        let sub = subtree_split(&t, 0, 1).unwrap();
        let part = Bipartition::from_side_a(t.vertex_count(), sub.vertices()).unwrap();
        let v = ti_check(&t, &[part], 2).unwrap();
        assert_eq!(
            (v.verdict, v.evidence.clone()),
            (Verdict::FailsAtScale, vec![1.0])
        );
        let interior = Bipartition::from_side_a(t.vertex_count(), &[0]).unwrap();
        assert_eq!(
            ti_check(&t, &[interior], 2).unwrap().verdict,
            Verdict::Inconclusive
        );
        let all = Bipartition::from_predicate(t.vertex_count(), |_| true);
        assert!(ti_check(&t, &[all], 2).is_err());
    }

    #[test]
    fn quotients() {
        let g = build_zd_box(2, 4).unwrap();
        let q = quotient_graph(&g, &g.whole()).unwrap();
        assert_eq!(q.class_count(), 1);
        assert_eq!(
            kalikow_weiss_diagnostic(&q, 0.3, &[]).unwrap(),
            f64::INFINITY
        );

        let l = Lattice::new(2, 4).unwrap();
        let q = quotient_graph(&g, &rows(&g, &l)).unwrap();
        assert_eq!(q.class_count(), 9);
        for c in 0..8 {
            assert_eq!(q.edge_count(c, c + 1), 9);
            assert_eq!(q.edge_count(c + 1, c), 9);
        }
        assert_eq!(q.multi_edges().len(), 8);
        assert_eq!(quotient_edge_prob(&q, 0, 2, 0.5).unwrap(), 0.0);
        assert!(quotient_edge_prob(&q, 0, 9, 0.5).is_err());
        let missing = Subgraph::induced(&g, (1..g.vertex_count()).collect()).unwrap();
        assert!(quotient_graph(&g, &missing).is_err());
    }

    #[test]
    fn edge_probability_formula() {
        // two classes joined by k parallel edges
        let t = build_regular_tree(2, 3).unwrap();
        let sub = subtree_split(&t, 0, 1).unwrap();
        let rest: Vec<EdgeId> = (0..t.edge_count()).filter(|&e| e != 0).collect();
        let h = Subgraph::new(&t, (0..t.vertex_count()).collect(), rest).unwrap();
        let q = quotient_graph(&t, &h).unwrap();
        assert_eq!(q.class_count(), 2);
        assert_eq!(q.classes()[1], sub.vertices());
        assert_relative_eq!(quotient_edge_prob(&q, 0, 1, 0.5).unwrap(), 0.5);
        let cut = vec![true, false];
        assert_relative_eq!(kalikow_weiss_diagnostic(&q, 0.25, &[cut]).unwrap(), 0.25);
        assert!(kalikow_weiss_diagnostic(&q, 0.25, &[vec![true, true]]).is_err());
    }

    #[test]
    fn row_quotient_cut_sums_grow() {
        let mut last = 0.0;
        for r in [8usize, 16, 32] {
            let g = build_zd_box(2, r).unwrap();
            let l = Lattice::new(2, r).unwrap();
            let q = quotient_graph(&g, &rows(&g, &l)).unwrap();
            let k = q.class_count();
            let ladder: Vec<Vec<bool>> = (1..k).map(|c| (0..k).map(|i| i < c).collect()).collect();
            let d = kalikow_weiss_diagnostic(&q, 0.05, &ladder).unwrap();
            assert_relative_eq!(d, 1.0 - 0.95f64.powi(2 * r as i32 + 1), epsilon = 1e-12);
            assert!(d > last);
            last = d;
        }
    }

    #[test]
    fn counterexamples() {
        let t = build_regular_tree(3, 6).unwrap();
        let sub = subtree_split(&t, 0, 1).unwrap();
        let part = Bipartition::from_side_a(t.vertex_count(), sub.vertices())
            .unwrap()
            .swapped();
        let ce = build_pe_counterexample(&t, 0, 1, &part).unwrap();
        assert_eq!(ce.removed, vec![0]);
        assert!(is_percolating_everywhere(&t, &ce.h));
        assert_eq!(components(&ce.h).len(), 2);
        let q = quotient_graph(&t, &ce.h).unwrap();
        assert_eq!((q.class_count(), q.edge_count(0, 1)), (2, 1));

        let glued = build_glued_trees(3, 4, 5).unwrap();
        let on_side1 = |v: VertexId| matches!(glued.label(v), VertexLabel::Tree { part: 1, .. });
        let part = Bipartition::from_predicate(glued.vertex_count(), |v| !on_side1(v));
        let b0 = glued
            .neighbors(0)
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| on_side1(w))
            .unwrap();
        let ce = build_pe_counterexample(&glued, 0, b0, &part).unwrap();
        assert_eq!(ce.removed.len(), 1);
        assert!(is_percolating_everywhere(&glued, &ce.h));
        let part = Bipartition::from_side_a(t.vertex_count(), sub.vertices())
            .unwrap()
            .swapped();
        let wrong = build_pe_counterexample(&t, 1, 0, &part);
        assert!(matches!(wrong, Err(Error::Precondition(_))));

        let g = build_zd_box(2, 4).unwrap();
        let l = Lattice::new(2, 4).unwrap();
        let half = Bipartition::from_predicate(g.vertex_count(), |v| l.coords(v)[0] <= 0);
        let err = build_pe_counterexample(&g, g.origin(), g.origin() + 1, &half);
        assert!(matches!(err, Err(Error::Precondition(_))), "{err:?}");
    }
}
