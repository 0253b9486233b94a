//! Bernoulli bond percolation: configurations, clusters, and the enlargement
//! `U(H)` of a subgraph by the open clusters of its vertices.

mod clusters;
mod enlarge;
mod invasion;
mod snapshot;

pub use clusters::{
    cluster_reaches_boundary, clusters, open_cluster, spans_boundary, ClusterLabeling, UnionFind,
};
pub use enlarge::{enlarge, near_condition};
pub use invasion::invasion_levels;
pub use snapshot::{read_snapshot, write_snapshot};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Topology};
use crate::hash::edge_uniform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeState {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
enum State {
    /// Edge `e` is open iff `edge_uniform(seed, key(e)) < p`.
    Lazy { seed: u64 },
    /// Explicit bits, one per edge id.
    Materialized {
        bits: Vec<u64>,
        len: usize,
        seed: Option<u64>,
    },
}

/// Open/closed state of every edge of a window.
///
/// Lazy configurations answer from a hash of `(seed, edge key)`, so two
/// configurations with the same seed and `p <= p'` are coupled: every edge
/// open in the first is open in the second.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    p: f64,
    forced_open: Vec<EdgeId>,
    state: State,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "p = {p} is outside [0, 1]"
        )))
    }
}

/// Lazy configuration at `p` with `forced_open` edges always open.
pub fn sample_config<T: Topology + ?Sized>(
    g: &T,
    p: f64,
    seed: u64,
    forced_open: &[EdgeId],
) -> Result<Configuration> {
    check_p(p)?;
    let mut forced = forced_open.to_vec();
    forced.sort_unstable();
    forced.dedup();
    for &e in &forced {
        g.check_edge(e)?;
    }
    Ok(Configuration {
        p,
        forced_open: forced,
        state: State::Lazy { seed },
    })
}

impl Configuration {
    /// Every edge closed, materialized.
    pub fn all_closed<T: Topology + ?Sized>(g: &T) -> Self {
        let len = g.edge_count();
        Configuration {
            p: 0.0,
            forced_open: Vec::new(),
            state: State::Materialized {
                bits: vec![0; len.div_ceil(64)],
                len,
                seed: None,
            },
        }
    }

    /// Materialized configuration with exactly `open` open. `p` is recorded
    /// as metadata only.
    pub fn from_open_edges<T: Topology + ?Sized>(g: &T, open: &[EdgeId], p: f64) -> Result<Self> {
        check_p(p)?;
        let mut cfg = Configuration::all_closed(g);
        cfg.p = p;
        if let State::Materialized { bits, .. } = &mut cfg.state {
            for &e in open {
                g.check_edge(e)?;
                bits[e / 64] |= 1 << (e % 64);
            }
        }
        Ok(cfg)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> Option<u64> {
        match self.state {
            State::Lazy { seed } => Some(seed),
            State::Materialized { seed, .. } => seed,
        }
    }

    pub fn forced_open(&self) -> &[EdgeId] {
        &self.forced_open
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.state, State::Materialized { .. })
    }

    /// Same seed and forced edges at a different `p`.
    pub fn at(&self, p: f64) -> Result<Self> {
        check_p(p)?;
        match self.state {
            State::Lazy { .. } => Ok(Configuration { p, ..self.clone() }),
            State::Materialized { .. } => Err(Error::Precondition(
                "only lazy configurations can be re-thresholded".into(),
            )),
        }
    }

    /// Unchecked state query; `e` must be an edge of `g`.
    #[inline]
    pub fn is_open<T: Topology + ?Sized>(&self, g: &T, e: EdgeId) -> bool {
        match &self.state {
            State::Lazy { seed } => {
                (!self.forced_open.is_empty() && self.forced_open.binary_search(&e).is_ok())
                    || edge_uniform(*seed, g.edge_key(e)) < self.p
            }
            State::Materialized { bits, .. } => bits[e / 64] & (1 << (e % 64)) != 0,
        }
    }

    pub fn edge_state<T: Topology + ?Sized>(&self, g: &T, e: EdgeId) -> Result<EdgeState> {
        g.check_edge(e)?;
        if let State::Materialized { len, .. } = self.state {
            if e >= len {
                return Err(Error::UnknownEdge(e));
            }
        }
        Ok(if self.is_open(g, e) {
            EdgeState::Open
        } else {
            EdgeState::Closed
        })
    }

    /// Explicit bit vector over all of `g`'s edges.
    pub fn materialize<T: Topology + ?Sized>(&self, g: &T) -> Self {
        let len = g.edge_count();
        let mut bits = vec![0u64; len.div_ceil(64)];
        for e in 0..len {
            if self.is_open(g, e) {
                bits[e / 64] |= 1 << (e % 64);
            }
        }
        Configuration {
            p: self.p,
            forced_open: self.forced_open.clone(),
            state: State::Materialized {
                bits,
                len,
                seed: self.seed(),
            },
        }
    }

    /// Sorted ids of open edges.
    pub fn open_edges<T: Topology + ?Sized>(&self, g: &T) -> Vec<EdgeId> {
        (0..g.edge_count())
            .filter(|&e| self.is_open(g, e))
            .collect()
    }

    /// Edgewise maximum. With independent inputs at `p1` and `p2` the result
    /// is distributed as a configuration at `p1 + p2 - p1 p2`, which is the
    /// `p` it records.
    pub fn combine(&self, other: &Configuration) -> Result<Configuration> {
        match (&self.state, &other.state) {
            (
                State::Materialized {
                    bits: a, len: la, ..
                },
                State::Materialized {
                    bits: b, len: lb, ..
                },
            ) => {
                if la != lb {
                    return Err(Error::Mismatch(format!(
                        "configurations over {la} and {lb} edges"
                    )));
                }
                let bits = a.iter().zip(b).map(|(x, y)| x | y).collect();
                let mut forced = self.forced_open.clone();
                forced.extend_from_slice(&other.forced_open);
                forced.sort_unstable();
                forced.dedup();
                let (p1, p2) = (self.p, other.p);
                Ok(Configuration {
                    p: p1 + p2 - p1 * p2,
                    forced_open: forced,
                    state: State::Materialized {
                        bits,
                        len: *la,
                        seed: None,
                    },
                })
            }
            _ => Err(Error::Mismatch(
                "combine requires materialized configurations".into(),
            )),
        }
    }

    pub(crate) fn restore(
        p: f64,
        seed: Option<u64>,
        forced_open: Vec<EdgeId>,
        materialized: Option<(usize, &[EdgeId])>,
    ) -> Self {
        let state = match (materialized, seed) {
            (None, Some(seed)) => State::Lazy { seed },
            (Some((len, open)), seed) => {
                let mut bits = vec![0u64; len.div_ceil(64)];
                for &e in open {
                    bits[e / 64] |= 1 << (e % 64);
                }
                State::Materialized { bits, len, seed }
            }
            (None, None) => unreachable!("lazy configurations always carry a seed"),
        };
        Configuration {
            p,
            forced_open,
            state,
        }
    }
}
