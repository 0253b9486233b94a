use super::{EdgeId, Topology, VertexId};
use crate::error::{Error, Result};

/// Edge of a subgraph with its endpoints cached, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

/// Vertex set plus edge subset of a host window, both in host ids.
///
/// Vertices are kept sorted and unique, edges sorted by id, so equality and
/// serialization are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subgraph {
    vertices: Vec<VertexId>,
    edges: Vec<SubEdge>,
}

impl Subgraph {
    /// Validates ids against `host` and requires every edge's endpoints in
    /// `vertices`.
    pub fn new<T: Topology + ?Sized>(
        host: &T,
        mut vertices: Vec<VertexId>,
        edge_ids: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        for &v in &vertices {
            host.check_vertex(v)?;
        }
        let mut edges = Vec::new();
        for e in edge_ids {
            let (a, b) = host.endpoints(e).ok_or(Error::UnknownEdge(e))?;
            let (u, v) = (a.min(b), a.max(b));
            if vertices.binary_search(&u).is_err() || vertices.binary_search(&v).is_err() {
                return Err(Error::InvalidSubgraph(format!(
                    "edge {e} = ({u},{v}) has an endpoint outside the vertex set"
                )));
            }
            edges.push(SubEdge { id: e, u, v });
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Subgraph { vertices, edges })
    }

    /// Normalizes arbitrary-order parts whose consistency the caller guarantees.
    pub(crate) fn from_unsorted(mut vertices: Vec<VertexId>, mut edges: Vec<SubEdge>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        Subgraph { vertices, edges }
    }

    pub fn empty() -> Self {
        Subgraph::default()
    }

    pub fn single_vertex<T: Topology + ?Sized>(host: &T, v: VertexId) -> Result<Self> {
        host.check_vertex(v)?;
        Ok(Subgraph {
            vertices: vec![v],
            edges: Vec::new(),
        })
    }

    pub fn whole<T: Topology + ?Sized>(host: &T) -> Self {
        let edges = (0..host.edge_count())
            .map(|id| {
                let (a, b) = host.endpoints(id).expect("dense edge ids");
                SubEdge {
                    id,
                    u: a.min(b),
                    v: a.max(b),
                }
            })
            .collect();
        Subgraph {
            vertices: (0..host.vertex_count()).collect(),
            edges,
        }
    }

    /// `vertices` with every host edge between two of them.
    pub fn induced<T: Topology + ?Sized>(host: &T, vertices: Vec<VertexId>) -> Result<Self> {
        let mut sub = Subgraph::new(host, vertices, [])?;
        let mut nb = Vec::new();
        let mut edges = Vec::new();
        for &v in &sub.vertices {
            nb.clear();
            host.neighbors_into(v, &mut nb);
            for &(w, id) in &nb {
                if v < w && sub.contains_vertex(w) {
                    edges.push(SubEdge { id, u: v, v: w });
                }
            }
        }
        edges.sort_unstable();
        sub.edges = edges;
        Ok(sub)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[SubEdge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search_by_key(&e, |s| s.id).is_ok()
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: merge_sorted(&self.vertices, &other.vertices, |&v| v),
            edges: merge_sorted(&self.edges, &other.edges, |e| e.id),
        }
    }

    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        is_sorted_subset(&self.vertices, &other.vertices, |&v| v)
            && is_sorted_subset(&self.edges, &other.edges, |e| e.id)
    }

    /// Adds `e` and its endpoints.
    pub fn with_edge<T: Topology + ?Sized>(&self, host: &T, e: EdgeId) -> Result<Subgraph> {
        let (a, b) = host.endpoints(e).ok_or(Error::UnknownEdge(e))?;
        let edge = SubEdge {
            id: e,
            u: a.min(b),
            v: a.max(b),
        };
        let verts = [edge.u, edge.v];
        Ok(Subgraph {
            vertices: merge_sorted(&self.vertices, &verts, |&v| v),
            edges: merge_sorted(&self.edges, &[edge], |e| e.id),
        })
    }
}

fn merge_sorted<T: Copy, K: Ord>(a: &[T], b: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match key(&a[i]).cmp(&key(&b[j])) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_sorted_subset<T, K: Ord>(a: &[T], b: &[T], key: impl Fn(&T) -> K) -> bool {
    let mut j = 0;
    for x in a {
        let k = key(x);
        while j < b.len() && key(&b[j]) < k {
            j += 1;
        }
        if j == b.len() || key(&b[j]) != k {
            return false;
        }
        j += 1;
    }
    true
}

/// Compact adjacency of a subgraph, indexed by position in its vertex list.
#[derive(Debug, Clone)]
pub struct LocalGraph {
    ids: Vec<VertexId>,
    offsets: Vec<usize>,
    adjacency: Vec<(usize, EdgeId)>,
}

impl LocalGraph {
    pub fn new(sub: &Subgraph) -> Self {
        let ids = sub.vertices.clone();
        let n = ids.len();
        let local = |v: VertexId| ids.binary_search(&v).expect("validated subgraph");
        let mut degree = vec![0usize; n];
        let ends: Vec<(usize, usize, EdgeId)> = sub
            .edges
            .iter()
            .map(|e| (local(e.u), local(e.v), e.id))
            .collect();
        for &(a, b, _) in &ends {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![(0, 0); offsets[n]];
        for &(a, b, e) in &ends {
            adjacency[fill[a]] = (b, e);
            fill[a] += 1;
            adjacency[fill[b]] = (a, e);
            fill[b] += 1;
        }
        LocalGraph {
            ids,
            offsets,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn local(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn global(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, EdgeId)] {
        &self.adjacency[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Component index per local vertex, numbered in order of first vertex.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, _) in self.neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// BFS distances from local vertex `s`; unreachable vertices get `usize::MAX`.
    pub fn distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in self.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}
