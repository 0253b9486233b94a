use super::{FamilyTag, Graph, Lattice, RegularTree, Topology, VertexId, VertexLabel};
use crate::error::{Error, Result};

/// Largest `vertices + edges` a generator will materialize.
pub const MAX_MATERIALIZED: usize = 40_000_000;

fn budget(what: &str, vertices: usize, edges: usize) -> Result<()> {
    match vertices.checked_add(edges) {
        Some(total) if total <= MAX_MATERIALIZED => Ok(()),
        _ => Err(Error::ResourceLimit(format!(
            "{what} needs {vertices} vertices and {edges} edges; limit is {MAX_MATERIALIZED} combined"
        ))),
    }
}

/// Box `{|x|_inf <= radius}` in Z^d. Ids and percolation keys match [`Lattice`].
pub fn build_zd_box(d: usize, radius: usize) -> Result<Graph> {
    let lat = Lattice::new(d, radius)?;
    budget("Z^d box", lat.vertex_count(), lat.edge_count())?;
    let labels = (0..lat.vertex_count())
        .map(|v| VertexLabel::Coord(lat.coords(v)))
        .collect();
    let edges: Vec<_> = (0..lat.edge_count())
        .map(|e| lat.endpoints(e).unwrap())
        .collect();
    let keys = (0..lat.edge_count()).map(|e| lat.edge_key(e)).collect();
    let boundary: Vec<_> = (0..lat.vertex_count())
        .filter(|&v| lat.is_boundary(v))
        .collect();
    let g = Graph::new(
        FamilyTag::ZdBox { dim: d, radius },
        labels,
        edges,
        &boundary,
        lat.origin(),
    )?;
    Ok(g.with_edge_keys(keys))
}

/// Ball of radius `depth` around the root of the `d`-regular tree.
pub fn build_regular_tree(d: usize, depth: usize) -> Result<Graph> {
    let t = RegularTree::new(d, depth)?;
    budget("regular tree", t.vertex_count(), t.edge_count())?;
    let labels = (0..t.vertex_count())
        .map(|v| VertexLabel::Tree {
            part: 0,
            depth: t.depth_of(v),
        })
        .collect();
    let edges = (0..t.edge_count())
        .map(|e| t.endpoints(e).unwrap())
        .collect();
    let boundary: Vec<_> = (0..t.vertex_count())
        .filter(|&v| t.is_boundary(v))
        .collect();
    Graph::new(
        FamilyTag::RegularTree { degree: d, depth },
        labels,
        edges,
        &boundary,
        0,
    )
}

/// Backbone `0..=levels`; one connection between 0 and 1 and `2k^3` between
/// `k` and `k+1`, each a two-edge path through its own midpoint.
///
/// Ids: backbone vertex `k` is `k`; midpoints follow level by level. Edges of
/// a connection are `(k, m)` then `(m, k+1)`.
pub fn build_line_graph(levels: usize) -> Result<Graph> {
    if levels == 0 {
        return Err(Error::InvalidParameter(
            "line graph needs at least one level".into(),
        ));
    }
    let overflow = || Error::ResourceLimit(format!("line graph with {levels} levels is too large"));
    let mut mids = 0usize;
    for k in 0..levels {
        mids = mids
            .checked_add(connections(k).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    budget("line graph", levels + 1 + mids, 2 * mids)?;
    let mut labels: Vec<_> = (0..=levels).map(VertexLabel::Level).collect();
    let mut edges = Vec::with_capacity(2 * mids);
    let mut boundary = vec![levels];
    for k in 0..levels {
        for index in 0..connections(k).unwrap() {
            let m = labels.len();
            labels.push(VertexLabel::Mid { level: k, index });
            edges.push((k, m));
            edges.push((m, k + 1));
            if k + 1 == levels {
                boundary.push(m);
            }
        }
    }
    Graph::new(FamilyTag::LineGraph { levels }, labels, edges, &boundary, 0)
}

/// Number of parallel connections between backbone levels `k` and `k + 1`.
pub(crate) fn connections(k: usize) -> Option<usize> {
    if k == 0 {
        Some(1)
    } else {
        k.checked_pow(3)?.checked_mul(2)
    }
}

/// Branching schedule with two children at the depths `floor(2^(k/2))`
/// (1, 2, 4, 5, 8, 11, 16, ...) and one child elsewhere, truncated to `depth`
/// levels. Level widths grow like `n^2`: the tree is transient, yet grows
/// subexponentially, so its critical probability is 1.
pub fn default_hybrid_branching(depth: usize) -> Vec<usize> {
    let mut b = vec![1; depth];
    for k in 0.. {
        let j = 2f64.powf(k as f64 / 2.0).floor() as usize;
        if j >= depth {
            break;
        }
        b[j] = 2;
    }
    b
}

/// Z^2 box with a spherically symmetric tree hung from its origin. A vertex
/// at tree depth `j` has `branching[j]` children; the tree has
/// `branching.len()` levels below the root.
pub fn build_hybrid_z2_tree(z2_radius: usize, branching: &[usize]) -> Result<Graph> {
    if let Some(j) = branching.iter().position(|&b| b == 0) {
        return Err(Error::InvalidParameter(format!(
            "branching at depth {j} is 0"
        )));
    }
    let lat = Lattice::new(2, z2_radius)?;
    let mut tree_size = 0usize;
    let mut width = 1usize;
    for &b in branching {
        width = width
            .checked_mul(b)
            .ok_or_else(|| Error::ResourceLimit("hybrid tree is too large".into()))?;
        tree_size = tree_size.saturating_add(width);
    }
    budget(
        "hybrid graph",
        lat.vertex_count() + tree_size,
        lat.edge_count() + tree_size,
    )?;

    let mut labels: Vec<_> = (0..lat.vertex_count())
        .map(|v| VertexLabel::Coord(lat.coords(v)))
        .collect();
    let mut edges: Vec<_> = (0..lat.edge_count())
        .map(|e| lat.endpoints(e).unwrap())
        .collect();
    let mut boundary: Vec<_> = (0..lat.vertex_count())
        .filter(|&v| lat.is_boundary(v))
        .collect();
    let root = lat.origin();
    let leaves = grow_tree(
        &mut labels,
        &mut edges,
        root,
        1,
        |j| branching.get(j).copied(),
        branching.len(),
    );
    if !branching.is_empty() {
        boundary.extend(leaves);
    }
    Graph::new(
        FamilyTag::HybridZ2Tree {
            z2_radius,
            branching: branching.to_vec(),
        },
        labels,
        edges,
        &boundary,
        root,
    )
}

/// Balls of radius `depth` in `T_{d1}` and `T_{d2}` sharing their root.
/// Vertex 0 is the shared root; side 0 follows in BFS order, then side 1.
pub fn build_glued_trees(d1: usize, d2: usize, depth: usize) -> Result<Graph> {
    let a = RegularTree::new(d1, depth)?;
    let b = RegularTree::new(d2, depth)?;
    let n = a.vertex_count() + b.vertex_count() - 1;
    budget("glued trees", n, n - 1)?;
    let mut labels = vec![VertexLabel::Glue];
    let mut edges = Vec::with_capacity(n - 1);
    let mut boundary = Vec::new();
    for (part, d) in [(0usize, d1), (1usize, d2)] {
        let leaves = grow_tree(
            &mut labels,
            &mut edges,
            0,
            part,
            |j| (j < depth).then_some(if j == 0 { d } else { d - 1 }),
            depth,
        );
        boundary.extend(leaves);
    }
    if depth == 0 {
        boundary = vec![0];
    }
    Graph::new(
        FamilyTag::GluedTrees { d1, d2, depth },
        labels,
        edges,
        &boundary,
        0,
    )
}

/// Appends a BFS-ordered tree below `root`; `children(j)` is the number of
/// children of a vertex at depth `j`. Returns the vertices at depth `depth`.
fn grow_tree(
    labels: &mut Vec<VertexLabel>,
    edges: &mut Vec<(VertexId, VertexId)>,
    root: VertexId,
    part: usize,
    children: impl Fn(usize) -> Option<usize>,
    depth: usize,
) -> Vec<VertexId> {
    let mut frontier = vec![root];
    for j in 0..depth {
        let c = children(j).unwrap_or(0);
        let mut next = Vec::with_capacity(frontier.len() * c);
        for &v in &frontier {
            for _ in 0..c {
                let w = labels.len();
                labels.push(VertexLabel::Tree { part, depth: j + 1 });
                edges.push((v, w));
                next.push(w);
            }
        }
        frontier = next;
    }
    frontier
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn zd_box_examples() {
        let g = build_zd_box(1, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 4));
        let b: Vec<_> = g.boundary().iter().map(|&v| g.label(v).clone()).collect();
        assert_eq!(
            b,
            vec![VertexLabel::Coord(vec![-2]), VertexLabel::Coord(vec![2])]
        );
        let g = build_zd_box(2, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert!(build_zd_box(0, 3).is_err());
        assert!(matches!(build_zd_box(6, 40), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn zd_box_edge_count_by_brute_force() {
        // every ordered pair of coordinates at l1 distance 1, halved
        let g = build_zd_box(3, 8).unwrap();
        let r = 8i64;
        let mut count = 0;
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    for (dx, dy, dz) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                        if (x + dx).abs() <= r && (y + dy).abs() <= r && (z + dz).abs() <= r {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(g.vertex_count(), 4913);
        assert_eq!(count, 13872);
        assert_eq!(g.edge_count(), count);
        g.validate(6).unwrap();
    }

    #[test]
    fn regular_tree_examples() {
        let g = build_regular_tree(3, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 3));
        let g = build_regular_tree(4, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (53, 52));
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.boundary().len(), 36);
        g.validate(4).unwrap();
        assert!(build_regular_tree(1, 2).is_err());
    }

    #[test]
    fn line_graph_examples() {
        let g = build_line_graph(1).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_list(), &[(0, 2), (2, 1)]);
        assert_eq!(g.boundary(), vec![1, 2]);

        let g = build_line_graph(3).unwrap();
        let mids: Vec<_> = g
            .labels()
            .iter()
            .filter(|l| matches!(l, VertexLabel::Mid { .. }))
            .collect();
        assert_eq!(mids.len(), 19);
        let between_2_3 = g
            .labels()
            .iter()
            .filter(|l| matches!(l, VertexLabel::Mid { level: 2, .. }))
            .count();
        assert_eq!(between_2_3, 16);
        let edges_2_3 = g
            .edge_list()
            .iter()
            .filter(|&&(u, v)| matches!(g.label(u.max(v)), VertexLabel::Mid { level: 2, .. }))
            .count();
        assert_eq!(edges_2_3, 32);
        assert_eq!(g.boundary().len(), 17);
        assert!(build_line_graph(0).is_err());
    }

    #[test]
    fn hybrid_examples() {
        let g = build_hybrid_z2_tree(1, &[1, 1, 1]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (12, 15));
        assert_eq!(g.degree(g.origin()), 5);
        assert!(build_hybrid_z2_tree(1, &[1, 0]).is_err());

        let branching: Vec<usize> = (0..64)
            .map(|j| {
                if j >= 1 && (j as u64).is_power_of_two() {
                    2
                } else {
                    1
                }
            })
            .collect();
        let g = build_hybrid_z2_tree(2, &branching).unwrap();
        let tree_max = (0..g.vertex_count())
            .filter(|&v| matches!(g.label(v), VertexLabel::Tree { .. }))
            .map(|v| g.degree(v))
            .max()
            .unwrap();
        assert!(tree_max <= 3);
    }

    #[test]
    fn default_branching_is_transient() {
        let b = default_hybrid_branching(100);
        let twos: Vec<_> = (0..100).filter(|&j| b[j] == 2).collect();
        assert_eq!(twos, vec![1, 2, 4, 5, 8, 11, 16, 22, 32, 45, 64, 90]);
        // root-to-depth resistance sum_n 1/|T_n| levels off
        let resistance = |n: usize| {
            let mut w = 1.0;
            let mut r = 0.0;
            for &x in &default_hybrid_branching(n) {
                r += 1.0 / w;
                w *= x as f64;
            }
            r
        };
        assert!(resistance(1 << 16) - resistance(1 << 10) < 0.01);
        assert!(resistance(1 << 16) < 3.7);
    }

    #[test]
    fn glued_tree_examples() {
        let g = build_glued_trees(3, 4, 1).unwrap();
        assert_eq!(g.degree(0), 7);
        let g = build_glued_trees(3, 4, 2).unwrap();
        let side = |p| {
            g.labels()
                .iter()
                .filter(|l| matches!(l, VertexLabel::Tree { part, .. } if *part == p))
                .count()
        };
        assert_eq!((side(0) + 1, side(1) + 1), (10, 17));
        assert_eq!(g.vertex_count(), 26);

        // the swap a <-> b of equal-size sides is a graph automorphism
        let g = build_glued_trees(3, 3, 3).unwrap();
        let half = (g.vertex_count() - 1) / 2;
        let swap = |v: usize| {
            if v == 0 {
                0
            } else if v <= half {
                v + half
            } else {
                v - half
            }
        };
        let edges: HashSet<_> = g
            .edge_list()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        for &(u, v) in g.edge_list() {
            let (a, b) = (swap(u), swap(v));
            assert!(edges.contains(&(a.min(b), a.max(b))));
        }
    }
}
