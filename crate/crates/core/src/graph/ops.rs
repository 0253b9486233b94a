use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::{EdgeId, SubEdge, Subgraph, Topology, VertexId};
use crate::error::{Error, Result};

/// All vertices within graph distance `n` of `x`, sorted.
pub fn ball<T: Topology + ?Sized>(g: &T, x: VertexId, n: usize) -> Result<Vec<VertexId>> {
    Ok(ball_distances(g, x, n)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

/// Like [`ball`], paired with each vertex's distance from `x`.
pub fn ball_distances<T: Topology + ?Sized>(
    g: &T,
    x: VertexId,
    n: usize,
) -> Result<Vec<(VertexId, usize)>> {
    g.check_vertex(x)?;
    let mut dist: FxHashMap<VertexId, usize> = FxHashMap::default();
    dist.insert(x, 0);
    let mut queue = VecDeque::from([x]);
    let mut nb = Vec::new();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == n {
            continue;
        }
        nb.clear();
        g.neighbors_into(v, &mut nb);
        for &(w, _) in &nb {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<_> = dist.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Split of the vertex set into sides A and B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    in_a: Vec<bool>,
}

impl Bipartition {
    /// A = `side_a`, B = everything else among `vertex_count` vertices.
    pub fn from_side_a(vertex_count: usize, side_a: &[VertexId]) -> Result<Self> {
        let mut in_a = vec![false; vertex_count];
        for &v in side_a {
            if v >= vertex_count {
                return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
            }
            in_a[v] = true;
        }
        Ok(Bipartition { in_a })
    }

    /// Both sides given explicitly; they must be disjoint and cover every vertex.
    pub fn from_sides(
        vertex_count: usize,
        side_a: &[VertexId],
        side_b: &[VertexId],
    ) -> Result<Self> {
        let mut seen = vec![0u8; vertex_count];
        for (side, set) in [(1u8, side_a), (2u8, side_b)] {
            for &v in set {
                if v >= vertex_count {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if seen[v] != 0 {
                    return Err(Error::InvalidPartition(format!("vertex {v} listed twice")));
                }
                seen[v] = side;
            }
        }
        if let Some(v) = seen.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!(
                "vertex {v} is on neither side"
            )));
        }
        Ok(Bipartition {
            in_a: seen.into_iter().map(|s| s == 1).collect(),
        })
    }

    pub fn from_predicate(vertex_count: usize, in_a: impl Fn(VertexId) -> bool) -> Self {
        Bipartition {
            in_a: (0..vertex_count).map(in_a).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.in_a.len()
    }

    pub fn in_a(&self, v: VertexId) -> bool {
        self.in_a[v]
    }

    pub fn side_a(&self) -> Vec<VertexId> {
        (0..self.in_a.len()).filter(|&v| self.in_a[v]).collect()
    }

    pub fn side_b(&self) -> Vec<VertexId> {
        (0..self.in_a.len()).filter(|&v| !self.in_a[v]).collect()
    }

    pub fn swapped(&self) -> Self {
        Bipartition {
            in_a: self.in_a.iter().map(|&a| !a).collect(),
        }
    }

    pub(crate) fn check_for<T: Topology + ?Sized>(&self, g: &T) -> Result<()> {
        if self.in_a.len() != g.vertex_count() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} vertices, graph has {}",
                self.in_a.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Edges with one endpoint on each side, sorted by id.
pub fn bipartition_cut<T: Topology + ?Sized>(g: &T, part: &Bipartition) -> Result<Vec<EdgeId>> {
    part.check_for(g)?;
    Ok((0..g.edge_count())
        .filter(|&e| {
            let (u, v) = g.endpoints(e).expect("dense edge ids");
            part.in_a(u) != part.in_a(v)
        })
        .collect())
}

/// Component of `t - e` containing `x`, where `x` is an endpoint of `e`.
pub fn subtree_split<T: Topology + ?Sized>(t: &T, e: EdgeId, x: VertexId) -> Result<Subgraph> {
    let (a, b) = t.endpoints(e).ok_or(Error::UnknownEdge(e))?;
    let other = if x == a {
        b
    } else if x == b {
        a
    } else {
        return Err(Error::InvalidParameter(format!(
            "vertex {x} is not an endpoint of edge {e}"
        )));
    };
    let mut seen = rustc_hash::FxHashSet::default();
    seen.insert(x);
    let mut stack = vec![(x, e)];
    let mut edges = Vec::new();
    let mut nb = Vec::new();
    while let Some((v, via)) = stack.pop() {
        nb.clear();
        t.neighbors_into(v, &mut nb);
        for &(w, id) in &nb {
            if id == via || id == e {
                continue;
            }
            if w == other || !seen.insert(w) {
                return Err(Error::InvalidGraph("graph is not a tree".into()));
            }
            edges.push(SubEdge {
                id,
                u: v.min(w),
                v: v.max(w),
            });
            stack.push((w, id));
        }
    }
    Ok(Subgraph::from_unsorted(seen.into_iter().collect(), edges))
}
