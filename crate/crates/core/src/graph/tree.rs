use super::{EdgeId, Topology, VertexId};
use crate::error::{Error, Result};

/// Implicit ball of radius `depth` around the root of the `degree`-regular tree.
///
/// Vertices are numbered in BFS order; edge `e` joins vertex `e + 1` to its
/// parent. Both numberings are prefixes of the ones for any deeper ball.
#[derive(Debug, Clone)]
pub struct RegularTree {
    degree: usize,
    depth: usize,
    // level_start[k] = id of the first vertex at depth k; one extra entry at the end
    level_start: Vec<usize>,
}

impl RegularTree {
    pub fn new(degree: usize, depth: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidParameter(format!(
                "tree degree must be >= 2, got {degree}"
            )));
        }
        let overflow = || {
            Error::ResourceLimit(format!(
                "T_{degree} ball of depth {depth} overflows the id space"
            ))
        };
        let mut level_start = Vec::with_capacity(depth + 2);
        level_start.push(0usize);
        let mut width = 1usize;
        for k in 0..=depth {
            let next = level_start[k].checked_add(width).ok_or_else(overflow)?;
            level_start.push(next);
            width = if k == 0 {
                degree
            } else {
                width.checked_mul(degree - 1).ok_or_else(overflow)?
            };
        }
        Ok(RegularTree {
            degree,
            depth,
            level_start,
        })
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn depth_of(&self, v: VertexId) -> usize {
        self.level_start.partition_point(|&s| s <= v) - 1
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.level_start[k + 1] - self.level_start[k]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        match self.depth_of(v) {
            0 => None,
            1 => Some(0),
            k => {
                let pos = v - self.level_start[k];
                Some(self.level_start[k - 1] + pos / (self.degree - 1))
            }
        }
    }

    fn children(&self, v: VertexId) -> std::ops::Range<VertexId> {
        let k = self.depth_of(v);
        if k == self.depth {
            return 0..0;
        }
        if k == 0 {
            return 1..1 + self.degree;
        }
        let pos = v - self.level_start[k];
        let first = self.level_start[k + 1] + pos * (self.degree - 1);
        first..first + self.degree - 1
    }
}

impl Topology for RegularTree {
    fn vertex_count(&self) -> usize {
        self.level_start[self.depth + 1]
    }

    fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    fn degree(&self, v: VertexId) -> usize {
        usize::from(v > 0) + self.children(v).len()
    }

    fn neighbors_into(&self, v: VertexId, out: &mut Vec<(VertexId, EdgeId)>) {
        if let Some(p) = self.parent(v) {
            out.push((p, v - 1));
        }
        for c in self.children(v) {
            out.push((c, c - 1));
        }
    }

    fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        if e >= self.edge_count() {
            return None;
        }
        Some((self.parent(e + 1)?, e + 1))
    }

    fn is_boundary(&self, v: VertexId) -> bool {
        self.depth_of(v) == self.depth
    }

    fn origin(&self) -> VertexId {
        0
    }

    fn window_radius(&self) -> usize {
        self.depth
    }
}
