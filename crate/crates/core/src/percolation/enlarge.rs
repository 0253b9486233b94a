use super::Configuration;
use crate::graph::{SubEdge, Subgraph, Topology};
use crate::vset::VertexSet;

/// `U(H)`: `h` together with the open cluster of each of its vertices.
///
/// Vertex set is the union of those clusters; edge set is `E(h)` plus every
/// open edge inside them.
pub fn enlarge<T: Topology + ?Sized>(g: &T, h: &Subgraph, cfg: &Configuration) -> Subgraph {
    let mut seen = VertexSet::for_universe(g.vertex_count());
    let mut stack = Vec::with_capacity(h.vertex_count());
    for &v in h.vertices() {
        seen.insert(v);
        stack.push(v);
    }
    let mut vertices = Vec::with_capacity(h.vertex_count());
    let mut edges: Vec<SubEdge> = h.edges().to_vec();
    let mut nb = Vec::new();
    while let Some(v) = stack.pop() {
        vertices.push(v);
        nb.clear();
        g.neighbors_into(v, &mut nb);
        for &(w, e) in &nb {
            if !cfg.is_open(g, e) {
                continue;
            }
            // both endpoints end up in the cluster; record from the smaller one
            if v < w {
                edges.push(SubEdge { id: e, u: v, v: w });
            }
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Subgraph::from_unsorted(vertices, edges)
}

/// Every vertex of `g` lies in `h` or has all its neighbors in `h`. Under
/// this condition enlarging twice equals enlarging once by the edgewise
/// maximum of the two configurations.
pub fn near_condition<T: Topology + ?Sized>(g: &T, h: &Subgraph) -> bool {
    let mut nb = Vec::new();
    (0..g.vertex_count()).all(|v| {
        if h.contains_vertex(v) {
            return true;
        }
        nb.clear();
        g.neighbors_into(v, &mut nb);
        nb.iter().all(|&(w, _)| h.contains_vertex(w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_zd_box, FamilyTag, Graph, VertexLabel};
    use crate::percolation::{open_cluster, sample_config};
    use crate::properties::is_connected;

    fn path3() -> Graph {
        let labels = (0..3).map(VertexLabel::Level).collect();
        Graph::new(
            FamilyTag::Derived { vertices: 3 },
            labels,
            vec![(0, 1), (1, 2)],
            &[0, 2],
            0,
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_gives_its_cluster() {
        let g = build_zd_box(2, 6).unwrap();
        let cfg = sample_config(&g, 0.55, 8, &[]).unwrap();
        let x = g.origin();
        let h = Subgraph::single_vertex(&g, x).unwrap();
        assert_eq!(enlarge(&g, &h, &cfg), open_cluster(&g, &cfg, x).unwrap());
    }

    #[test]
    fn all_closed_is_identity() {
        let g = build_zd_box(2, 3).unwrap();
        let h = Subgraph::induced(&g, vec![0, 1, 2, 9, 30]).unwrap();
        assert_eq!(enlarge(&g, &h, &Configuration::all_closed(&g)), h);
    }

    #[test]
    fn path_example() {
        let g = path3();
        let cfg = Configuration::from_open_edges(&g, &[0], 0.5).unwrap();
        let h = Subgraph::single_vertex(&g, 0).unwrap();
        let u = enlarge(&g, &h, &cfg);
        assert_eq!(u.vertices(), &[0, 1]);
        assert_eq!(u.edge_ids().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn near_condition_examples() {
        let g = path3();
        assert!(near_condition(&g, &Subgraph::new(&g, vec![1], []).unwrap()));
        assert!(!near_condition(
            &g,
            &Subgraph::new(&g, vec![0], []).unwrap()
        ));
        // repeated enlargement falls short without the condition
        let h = Subgraph::single_vertex(&g, 0).unwrap();
        let w1 = Configuration::from_open_edges(&g, &[1], 0.5).unwrap();
        let w2 = Configuration::from_open_edges(&g, &[0], 0.5).unwrap();
        let twice = enlarge(&g, &enlarge(&g, &h, &w1), &w2);
        let once = enlarge(&g, &h, &w1.combine(&w2).unwrap());
        assert_eq!((twice.vertex_count(), once.vertex_count()), (2, 3));
    }

    #[test]
    fn keeps_closed_edges_of_h() {
        let g = path3();
        let h = Subgraph::new(&g, vec![1, 2], [1]).unwrap();
        let u = enlarge(&g, &h, &Configuration::all_closed(&g));
        assert!(u.contains_edge(1));
        assert!(is_connected(&u));
    }
}
