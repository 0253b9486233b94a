use super::Configuration;
use crate::error::Result;
use crate::graph::{Subgraph, Topology, VertexId};
use crate::vset::VertexSet;

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Open clusters of a whole window. Each cluster is labeled by its smallest
/// vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    label: Vec<VertexId>,
    // indexed by label; zero / false elsewhere
    size: Vec<usize>,
    touches_boundary: Vec<bool>,
}

impl ClusterLabeling {
    pub fn label(&self, v: VertexId) -> VertexId {
        self.label[v]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.label
    }

    pub fn cluster_size(&self, v: VertexId) -> usize {
        self.size[self.label[v]]
    }

    pub fn touches_boundary(&self, v: VertexId) -> bool {
        self.touches_boundary[self.label[v]]
    }

    /// `(label, size, touches_boundary)` per cluster, by label.
    pub fn clusters(&self) -> impl Iterator<Item = (VertexId, usize, bool)> + '_ {
        (0..self.label.len())
            .filter(|&v| self.label[v] == v)
            .map(|v| (v, self.size[v], self.touches_boundary[v]))
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters().count()
    }
}

pub fn clusters<T: Topology + ?Sized>(g: &T, cfg: &Configuration) -> ClusterLabeling {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for e in 0..g.edge_count() {
        if cfg.is_open(g, e) {
            let (u, v) = g.endpoints(e).expect("dense edge ids");
            uf.union(u, v);
        }
    }
    let mut min_of_root = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if min_of_root[r] == usize::MAX {
            min_of_root[r] = v;
        }
    }
    let mut label = vec![0; n];
    let mut size = vec![0; n];
    let mut touches_boundary = vec![false; n];
    for v in 0..n {
        let l = min_of_root[uf.find(v)];
        label[v] = l;
        size[l] += 1;
        touches_boundary[l] |= g.is_boundary(v);
    }
    ClusterLabeling {
        label,
        size,
        touches_boundary,
    }
}

/// Vertices and open edges of the cluster of `x`.
pub fn open_cluster<T: Topology + ?Sized>(
    g: &T,
    cfg: &Configuration,
    x: VertexId,
) -> Result<Subgraph> {
    let h = Subgraph::single_vertex(g, x)?;
    Ok(super::enlarge(g, &h, cfg))
}

/// Whether the cluster of `x` contains a boundary vertex.
pub fn spans_boundary<T: Topology + ?Sized>(
    g: &T,
    labeling: &ClusterLabeling,
    x: VertexId,
) -> Result<bool> {
    g.check_vertex(x)?;
    Ok(labeling.touches_boundary(x))
}

/// Same question as [`spans_boundary`] answered by a search from `x` that
/// stops at the first boundary vertex, for windows too large to label.
pub fn cluster_reaches_boundary<T: Topology + ?Sized>(
    g: &T,
    cfg: &Configuration,
    x: VertexId,
) -> Result<bool> {
    g.check_vertex(x)?;
    let mut seen = VertexSet::for_universe(g.vertex_count());
    seen.insert(x);
    let mut stack = vec![x];
    let mut nb = Vec::new();
    while let Some(v) = stack.pop() {
        if g.is_boundary(v) {
            return Ok(true);
        }
        nb.clear();
        g.neighbors_into(v, &mut nb);
        for &(w, e) in &nb {
            if cfg.is_open(g, e) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_zd_box, FamilyTag, Graph, Lattice, VertexLabel};
    use crate::percolation::sample_config;

    fn triangle() -> Graph {
        let labels = (0..3).map(VertexLabel::Level).collect();
        Graph::new(
            FamilyTag::Derived { vertices: 3 },
            labels,
            vec![(0, 1), (1, 2), (0, 2)],
            &[],
            0,
        )
        .unwrap()
    }

    #[test]
    fn trivial_labelings() {
        let g = build_zd_box(2, 3).unwrap();
        let c0 = clusters(&g, &sample_config(&g, 0.0, 1, &[]).unwrap());
        assert_eq!(c0.cluster_count(), g.vertex_count());
        let c1 = clusters(&g, &sample_config(&g, 1.0, 1, &[]).unwrap());
        assert_eq!(c1.cluster_count(), 1);
        assert_eq!(c1.cluster_size(17), g.vertex_count());
    }

    #[test]
    fn triangle_with_one_open_edge() {
        let g = triangle();
        let cfg = Configuration::from_open_edges(&g, &[0], 0.5).unwrap();
        let c = clusters(&g, &cfg);
        assert_eq!(c.labels(), &[0, 0, 2]);
        let sizes: Vec<_> = c.clusters().map(|(_, s, _)| s).collect();
        assert_eq!(sizes, vec![2, 1]);
        let sub = open_cluster(&g, &cfg, 0).unwrap();
        assert_eq!(sub.vertices(), &[0, 1]);
        assert_eq!(sub.edge_ids().collect::<Vec<_>>(), vec![0]);
        let lone = open_cluster(&g, &Configuration::all_closed(&g), 2).unwrap();
        assert_eq!((lone.vertices(), lone.edge_count()), (&[2][..], 0));
    }

    #[test]
    fn boundary_spanning() {
        let g = build_zd_box(2, 4).unwrap();
        let o = g.origin();
        let closed = sample_config(&g, 0.0, 0, &[]).unwrap();
        let open = sample_config(&g, 1.0, 0, &[]).unwrap();
        assert!(!spans_boundary(&g, &clusters(&g, &closed), o).unwrap());
        assert!(spans_boundary(&g, &clusters(&g, &open), o).unwrap());
        assert!(spans_boundary(&g, &clusters(&g, &closed), 0).unwrap());
        assert!(spans_boundary(&g, &clusters(&g, &closed), 10_000).is_err());
    }

    #[test]
    fn early_exit_search_agrees_with_labeling() {
        let l = Lattice::new(2, 12).unwrap();
        for seed in 0..20 {
            let cfg = sample_config(&l, 0.5, seed, &[]).unwrap();
            let lab = clusters(&l, &cfg);
            for v in [l.origin(), 3, 100] {
                assert_eq!(
                    cluster_reaches_boundary(&l, &cfg, v).unwrap(),
                    lab.touches_boundary(v)
                );
            }
        }
    }
}
