use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{Topology, VertexId};
use crate::hash::{edge_hash, unit_interval};
use crate::vset::VertexSet;

/// Exact thresholds for "the open cluster of `sources` reaches level `k`",
/// for every `k` in `0..=max_level`, under the lazy configuration with `seed`.
///
/// Grows the cluster by always adding the cheapest boundary edge (invasion
/// percolation). The event for level `k` holds at `p` iff `p > t[k]`, where
/// `t[k]` is the largest edge uniform on the cheapest path to that level.
/// Sources already at level `k` give `-inf`; unreachable levels give `+inf`.
pub fn invasion_levels<T: Topology + ?Sized>(
    g: &T,
    seed: u64,
    sources: &[VertexId],
    level: impl Fn(VertexId) -> usize,
    max_level: usize,
) -> Vec<f64> {
    let mut t = vec![f64::INFINITY; max_level + 1];
    let mut reached = 0usize;
    let mut seen = VertexSet::for_universe(g.vertex_count());
    let mut heap = BinaryHeap::new();
    let mut nb = Vec::new();
    let mut current = f64::NEG_INFINITY;
    t[0] = current;

    let mut visit = |v: VertexId,
                     current: f64,
                     reached: &mut usize,
                     t: &mut Vec<f64>,
                     heap: &mut BinaryHeap<Reverse<(u64, VertexId)>>,
                     seen: &VertexSet| {
        let lv = level(v).min(max_level);
        while *reached < lv {
            *reached += 1;
            t[*reached] = current;
        }
        nb.clear();
        g.neighbors_into(v, &mut nb);
        for &(w, e) in &nb {
            if !seen.contains(w) {
                heap.push(Reverse((edge_hash(seed, g.edge_key(e)) >> 11, w)));
            }
        }
    };

    for &s in sources {
        if seen.insert(s) {
            visit(s, current, &mut reached, &mut t, &mut heap, &seen);
        }
    }
    while reached < max_level {
        let Some(Reverse((h, w))) = heap.pop() else {
            break;
        };
        if !seen.insert(w) {
            continue;
        }
        current = current.max(unit_interval(h << 11));
        visit(w, current, &mut reached, &mut t, &mut heap, &seen);
    }
    t
}
