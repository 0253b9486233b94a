use rustc_hash::FxHashSet;

use crate::graph::VertexId;

/// Windows up to this many vertices get a dense bitset.
const DENSE_LIMIT: usize = 1 << 22;

/// Visited-set that stays small on huge implicit windows.
#[derive(Debug, Clone)]
pub enum VertexSet {
    Dense { bits: Vec<u64>, len: usize },
    Sparse(FxHashSet<VertexId>),
}

impl VertexSet {
    pub fn for_universe(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            VertexSet::Dense {
                bits: vec![0; n.div_ceil(64)],
                len: 0,
            }
        } else {
            VertexSet::Sparse(FxHashSet::default())
        }
    }

    /// Returns true if `v` was not yet present.
    #[inline]
    pub fn insert(&mut self, v: VertexId) -> bool {
        match self {
            VertexSet::Dense { bits, len } => {
                let (w, b) = (v / 64, 1u64 << (v % 64));
                if bits[w] & b == 0 {
                    bits[w] |= b;
                    *len += 1;
                    true
                } else {
                    false
                }
            }
            VertexSet::Sparse(s) => s.insert(v),
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        match self {
            VertexSet::Dense { bits, .. } => bits[v / 64] & (1u64 << (v % 64)) != 0,
            VertexSet::Sparse(s) => s.contains(&v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree() {
        let mut d = VertexSet::for_universe(1000);
        let mut s = VertexSet::Sparse(FxHashSet::default());
        let mut fresh = 0;
        for v in [3, 999, 3, 64, 0, 63] {
            let new = d.insert(v);
            assert_eq!(new, s.insert(v));
            fresh += usize::from(new);
        }
        assert_eq!(fresh, 5);
        assert!(d.contains(64) && s.contains(64) && !d.contains(65));
    }
}
