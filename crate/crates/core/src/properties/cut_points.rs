use crate::error::Result;
use crate::graph::{ball, LocalGraph, Subgraph, Topology, VertexId};

/// Vertices `x` of `sub` within host distance `radius` of `center` that lie
/// on an edge of `sub` whose removal splits `x`'s component into two parts
/// that both contain host boundary vertices. Sorted.
pub fn cut_points<T: Topology + ?Sized>(
    g: &T,
    sub: &Subgraph,
    center: VertexId,
    radius: usize,
) -> Result<Vec<VertexId>> {
    let tested = ball(g, center, radius)?;
    let lg = LocalGraph::new(sub);
    let n = lg.len();
    let mut hit = vec![false; n];

    let mut tin = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut below = vec![0usize; n]; // boundary vertices in the DFS subtree
    let mut timer = 0;
    // (vertex, edge used to enter it, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    let mut bridges: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if tin[root] != usize::MAX {
            continue;
        }
        let mut tree_edges: Vec<(usize, usize)> = Vec::new();
        tin[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (x, via, ref mut next)) = stack.last_mut() {
            if let Some(&(y, e)) = lg.neighbors(x).get(*next) {
                *next += 1;
                if e == via {
                    continue;
                }
                if tin[y] == usize::MAX {
                    tin[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, e, 0));
                    tree_edges.push((x, y));
                } else {
                    low[x] = low[x].min(tin[y]);
                }
            } else {
                stack.pop();
                below[x] += usize::from(g.is_boundary(lg.global(x)));
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[x]);
                    below[parent] += below[x];
                }
            }
        }
        let total = below[root];
        for (p, c) in tree_edges {
            if low[c] > tin[p] && below[c] > 0 && total > below[c] {
                bridges.push((p, c));
            }
        }
    }
    for (p, c) in bridges {
        hit[p] = true;
        hit[c] = true;
    }
    Ok(tested
        .into_iter()
        .filter(|&v| lg.local(v).is_some_and(|i| hit[i]))
        .collect())
}
