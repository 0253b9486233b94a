use super::{EdgeId, Topology, VertexId};
use crate::error::{Error, Result};
use crate::hash::fold_key;

/// Implicit box `{x in Z^d : |x|_inf <= radius}` with nearest-neighbor edges.
///
/// Vertex ids are mixed-radix encodings of `x + radius` with axis 0 most
/// significant. Edge ids are grouped by direction: all axis-0 edges first,
/// each group indexed by its lower endpoint. Nothing is stored per vertex,
/// so windows far too large to materialize can still be explored lazily.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    radius: usize,
    side: usize,
    vertices: usize,
    per_axis: usize,
    strides: Vec<usize>,
    // edge_strides[axis][i]: place value of digit i inside the axis group
    edge_strides: Vec<Vec<usize>>,
}

impl Lattice {
    pub fn new(dim: usize, radius: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "lattice dimension must be >= 1".into(),
            ));
        }
        if radius == 0 {
            return Err(Error::InvalidParameter(
                "lattice radius must be >= 1".into(),
            ));
        }
        let overflow = || {
            Error::ResourceLimit(format!(
                "Z^{dim} box of radius {radius} overflows the id space"
            ))
        };
        let side = radius
            .checked_mul(2)
            .and_then(|s| s.checked_add(1))
            .ok_or_else(overflow)?;
        let vertices = checked_pow(side, dim).ok_or_else(overflow)?;
        let per_axis = checked_pow(side, dim - 1)
            .and_then(|x| x.checked_mul(side - 1))
            .ok_or_else(overflow)?;
        per_axis.checked_mul(dim).ok_or_else(overflow)?;
        let strides = (0..dim).map(|i| side.pow((dim - 1 - i) as u32)).collect();
        let edge_strides = (0..dim)
            .map(|axis| {
                let mut s = vec![0; dim];
                let mut place = 1;
                for i in (0..dim).rev() {
                    s[i] = place;
                    place *= if i == axis { side - 1 } else { side };
                }
                s
            })
            .collect();
        Ok(Lattice {
            dim,
            radius,
            side,
            vertices,
            per_axis,
            strides,
            edge_strides,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn coords(&self, v: VertexId) -> Vec<i64> {
        let r = self.radius as i64;
        self.strides
            .iter()
            .map(|&s| ((v / s) % self.side) as i64 - r)
            .collect()
    }

    pub fn vertex_at(&self, x: &[i64]) -> Option<VertexId> {
        if x.len() != self.dim {
            return None;
        }
        let r = self.radius as i64;
        let mut v = 0;
        for (c, s) in x.iter().zip(&self.strides) {
            if c.abs() > r {
                return None;
            }
            v += (c + r) as usize * s;
        }
        Some(v)
    }

    pub fn linf_norm(&self, v: VertexId) -> usize {
        self.strides
            .iter()
            .map(|&s| ((v / s) % self.side).abs_diff(self.radius))
            .max()
            .unwrap_or(0)
    }

    pub fn l1_norm(&self, v: VertexId) -> usize {
        self.strides
            .iter()
            .map(|&s| ((v / s) % self.side).abs_diff(self.radius))
            .sum()
    }

    #[inline]
    fn digit(&self, v: VertexId, axis: usize) -> usize {
        (v / self.strides[axis]) % self.side
    }

    pub fn edge_axis(&self, e: EdgeId) -> usize {
        e / self.per_axis
    }
}

/// Percolation key of the edge from `lower` to `lower + e_axis`. Depends only
/// on coordinates, so boxes of different radii agree on shared edges.
pub fn coord_edge_key(lower: &[i64], axis: usize) -> u64 {
    let d = lower.len();
    if d <= 8 {
        let bits = 61 / d as u32;
        let half = 1i64 << (bits - 1);
        if lower.iter().all(|&c| -half <= c && c < half) {
            let mut packed = 0u64;
            for &c in lower {
                packed = (packed << bits) | (c + half) as u64;
            }
            return (packed << 3) | axis as u64;
        }
    }
    fold_key(
        lower
            .iter()
            .map(|&c| c as u64)
            .chain([axis as u64 | 0xA000_0000_0000_0000]),
    )
}

impl Topology for Lattice {
    fn vertex_count(&self) -> usize {
        self.vertices
    }

    fn edge_count(&self) -> usize {
        self.per_axis * self.dim
    }

    fn degree(&self, v: VertexId) -> usize {
        (0..self.dim)
            .map(|a| {
                let x = self.digit(v, a);
                usize::from(x > 0) + usize::from(x + 1 < self.side)
            })
            .sum()
    }

    fn neighbors_into(&self, v: VertexId, out: &mut Vec<(VertexId, EdgeId)>) {
        // dim <= 40 always: 3^41 overflows u64
        let mut digits = [0usize; 64];
        for (i, &s) in self.strides.iter().enumerate() {
            digits[i] = (v / s) % self.side;
        }
        let digits = &digits[..self.dim];
        for axis in 0..self.dim {
            let x = digits[axis];
            let s = self.strides[axis];
            let es = &self.edge_strides[axis];
            let local: usize = digits.iter().zip(es).map(|(d, p)| d * p).sum();
            let base = axis * self.per_axis;
            if x > 0 {
                out.push((v - s, base + local - es[axis]));
            }
            if x + 1 < self.side {
                out.push((v + s, base + local));
            }
        }
    }

    fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        if e >= self.edge_count() {
            return None;
        }
        let axis = e / self.per_axis;
        let local = e % self.per_axis;
        let es = &self.edge_strides[axis];
        let mut lower = 0;
        for i in 0..self.dim {
            let radix = if i == axis { self.side - 1 } else { self.side };
            lower += ((local / es[i]) % radix) * self.strides[i];
        }
        Some((lower, lower + self.strides[axis]))
    }

    fn is_boundary(&self, v: VertexId) -> bool {
        self.linf_norm(v) == self.radius
    }

    fn origin(&self) -> VertexId {
        self.strides.iter().map(|s| s * self.radius).sum()
    }

    fn window_radius(&self) -> usize {
        self.radius
    }

    fn edge_key(&self, e: EdgeId) -> u64 {
        let (lower, _) = self.endpoints(e).expect("edge id in range");
        coord_edge_key(&self.coords(lower), e / self.per_axis)
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
