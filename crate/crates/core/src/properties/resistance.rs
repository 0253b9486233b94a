//! Effective resistance of unit-conductance subgraphs.

use nalgebra::{DMatrix, DVector};
use rustc_hash::FxHashMap;

use super::{PropertyKind, PropertyVerdict, Verdict};
use crate::error::{Error, Result};
use crate::graph::{LocalGraph, Subgraph, VertexId};

/// Above this many unknowns the reduced system is solved by conjugate gradients.
pub const DENSE_LIMIT: usize = 1000;
const CG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resistance {
    Finite(f64),
    /// No target is reachable from the source.
    Infinite,
}

impl Resistance {
    /// `f64::INFINITY` for [`Resistance::Infinite`].
    pub fn value(self) -> f64 {
        match self {
            Resistance::Finite(r) => r,
            Resistance::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Resistance::Finite(_))
    }
}

/// Resistance between `source` and the set `targets` (shorted together),
/// every edge of `sub` a unit resistor.
pub fn effective_resistance(
    sub: &Subgraph,
    source: VertexId,
    targets: &[VertexId],
) -> Result<Resistance> {
    if targets.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let lg = LocalGraph::new(sub);
    let s = lg.local(source).ok_or(Error::UnknownVertex(source))?;
    let mut grounded = vec![false; lg.len()];
    for &t in targets {
        grounded[lg.local(t).ok_or(Error::UnknownVertex(t))?] = true;
    }
    Ok(solve(&lg, s, &grounded, |_| true))
}

/// Grounds the `grounded` vertices and solves on the part of the source's
/// component admitted by `keep`. Edges with a dropped endpoint are ignored.
fn solve(lg: &LocalGraph, s: usize, grounded: &[bool], keep: impl Fn(usize) -> bool) -> Resistance {
    solve_limited(lg, s, grounded, keep, DENSE_LIMIT)
}

fn solve_limited(
    lg: &LocalGraph,
    s: usize,
    grounded: &[bool],
    keep: impl Fn(usize) -> bool,
    dense_limit: usize,
) -> Resistance {
    if grounded[s] {
        return Resistance::Finite(0.0);
    }
    // node 0 is ground; others numbered in discovery order
    let mut node = vec![usize::MAX; lg.len()];
    let mut count = 1;
    node[s] = count;
    count += 1;
    let mut stack = vec![s];
    let mut reached_ground = false;
    let mut net = Network::default();
    net.adj.push(FxHashMap::default());
    net.adj.push(FxHashMap::default());
    while let Some(x) = stack.pop() {
        for &(y, _) in lg.neighbors(x) {
            if !keep(y) {
                continue;
            }
            let ny = if grounded[y] {
                reached_ground = true;
                0
            } else {
                if node[y] == usize::MAX {
                    node[y] = count;
                    count += 1;
                    net.adj.push(FxHashMap::default());
                    stack.push(y);
                }
                node[y]
            };
            // each non-ground edge is seen from both ends; add it once
            if ny == 0 || node[x] < ny {
                net.add(node[x], ny, 1.0);
            }
        }
    }
    if !reached_ground {
        return Resistance::Infinite;
    }
    net.reduce(1);
    Resistance::Finite(net.solve(1, dense_limit))
}

/// Weighted graph with merged parallel edges; node 0 is ground.
#[derive(Default)]
struct Network {
    adj: Vec<FxHashMap<usize, f64>>,
}

impl Network {
    fn add(&mut self, a: usize, b: usize, c: f64) {
        if a == b {
            return;
        }
        *self.adj[a].entry(b).or_insert(0.0) += c;
        *self.adj[b].entry(a).or_insert(0.0) += c;
    }

    fn remove_node(&mut self, x: usize) -> Vec<(usize, f64)> {
        let nbrs: Vec<(usize, f64)> = self.adj[x].drain().collect();
        for &(y, _) in &nbrs {
            self.adj[y].remove(&x);
        }
        nbrs
    }

    /// Removes dangling nodes and replaces series pairs, never touching
    /// ground or `keep`.
    fn reduce(&mut self, keep: usize) {
        let mut work: Vec<usize> = (2..self.adj.len()).rev().collect();
        while let Some(x) = work.pop() {
            if x == 0 || x == keep {
                continue;
            }
            match self.adj[x].len() {
                1 => {
                    for (y, _) in self.remove_node(x) {
                        work.push(y);
                    }
                }
                2 => {
                    let nbrs = self.remove_node(x);
                    let (a, ca) = nbrs[0];
                    let (b, cb) = nbrs[1];
                    self.add(a, b, ca * cb / (ca + cb));
                    work.push(a);
                    work.push(b);
                }
                _ => {}
            }
        }
    }

    /// Potential at `s` when unit current enters at `s` and leaves at ground.
    fn solve(&self, s: usize, dense_limit: usize) -> f64 {
        let mut index = vec![usize::MAX; self.adj.len()];
        let mut order = Vec::new();
        for (x, nbrs) in self.adj.iter().enumerate().skip(1) {
            if x == s || !nbrs.is_empty() {
                index[x] = order.len();
                order.push(x);
            }
        }
        let n = order.len();
        let diag: Vec<f64> = order.iter().map(|&x| self.adj[x].values().sum()).collect();
        // off-diagonal entries, sorted so the result is independent of hash order
        let off: Vec<Vec<(usize, f64)>> = order
            .iter()
            .map(|&x| {
                let mut row: Vec<(usize, f64)> = self.adj[x]
                    .iter()
                    .filter(|(&y, _)| y != 0)
                    .map(|(&y, &c)| (index[y], c))
                    .collect();
                row.sort_by_key(|&(j, _)| j);
                row
            })
            .collect();
        let si = index[s];
        if n <= dense_limit {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = diag[i];
                for &(j, c) in &off[i] {
                    m[(i, j)] -= c;
                }
            }
            let mut b = DVector::<f64>::zeros(n);
            b[si] = 1.0;
            let chol = m
                .cholesky()
                .expect("grounded Laplacian is positive definite");
            chol.solve(&b)[si]
        } else {
            conjugate_gradient(&diag, &off, si)
        }
    }
}

/// Jacobi-preconditioned CG for `L v = e_s`.
fn conjugate_gradient(diag: &[f64], off: &[Vec<(usize, f64)>], s: usize) -> f64 {
    let n = diag.len();
    let apply = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let mut acc = diag[i] * v[i];
            for &(j, c) in &off[i] {
                acc -= c * v[j];
            }
            out[i] = acc;
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut x = vec![0.0; n];
    let mut r = vec![0.0; n];
    r[s] = 1.0;
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(a, d)| a / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for _ in 0..(20 * n).max(1000) {
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= CG_TOLERANCE {
            break;
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x[s]
}

/// `r_eff[i]`: resistance from `center` to the vertices at intrinsic distance
/// `>= radii[i]`, i.e. to the outside of the intrinsic ball.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceProfile {
    pub center: VertexId,
    pub radii: Vec<usize>,
    pub r_eff: Vec<Resistance>,
}

pub fn resistance_profile(
    sub: &Subgraph,
    center: VertexId,
    radii: &[usize],
) -> Result<ResistanceProfile> {
    if radii.is_empty() || radii[0] == 0 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    let lg = LocalGraph::new(sub);
    let c = lg.local(center).ok_or(Error::UnknownVertex(center))?;
    let dist = lg.distances(c);
    let r_eff = radii
        .iter()
        .map(|&n| {
            let grounded: Vec<bool> = dist.iter().map(|&d| d != usize::MAX && d >= n).collect();
            // the shell beyond n is shorted to ground and never needs visiting
            solve(&lg, c, &grounded, |y| dist[y] <= n)
        })
        .collect();
    Ok(ResistanceProfile {
        center,
        radii: radii.to_vec(),
        r_eff,
    })
}

/// Cutoffs of the resistance-growth test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransienceParams {
    /// Largest top increment, relative to the resistance below it, read as vanishing.
    pub eps_tail: f64,
    /// Top increment must also be at most this fraction of the previous one.
    pub decay: f64,
    /// Top increment at least this fraction of the previous one reads as persistent growth.
    pub persist: f64,
}

impl Default for TransienceParams {
    fn default() -> Self {
        TransienceParams {
            eps_tail: 0.25,
            decay: 0.75,
            persist: 0.9,
        }
    }
}

/// Reads the last three radii of the profile. Evidence: the profile values,
/// then the relative top increment and the ratio of the last two increments.
pub fn transience_proxy(
    sub: &Subgraph,
    center: VertexId,
    radii: &[usize],
    params: TransienceParams,
    window: usize,
) -> Result<(PropertyVerdict, ResistanceProfile)> {
    if radii.len() < 3 {
        return Err(Error::InvalidParameter("need at least three radii".into()));
    }
    if !sub.contains_vertex(center) {
        return Err(Error::UnknownVertex(center));
    }
    if !sub.edges().iter().any(|e| e.u == center || e.v == center) {
        return Err(Error::IsolatedVertex(center));
    }
    let profile = resistance_profile(sub, center, radii)?;
    let k = radii.len();
    let (r0, r1, r2) = (
        profile.r_eff[k - 3].value(),
        profile.r_eff[k - 2].value(),
        profile.r_eff[k - 1].value(),
    );
    let mut evidence: Vec<f64> = profile.r_eff.iter().map(|r| r.value()).collect();
    let verdict = if !r2.is_finite() {
        PropertyVerdict::new(PropertyKind::Transient, Verdict::FailsAtScale, window)
            .with_reason("finite_component")
    } else {
        let (top, prev) = (r2 - r1, r1 - r0);
        let rel = if r1 > 0.0 { top / r1 } else { f64::INFINITY };
        let ratio = if prev > 0.0 {
            top / prev
        } else if top > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        evidence.push(rel);
        evidence.push(ratio);
        if top <= params.eps_tail * r1 && top <= params.decay * prev {
            PropertyVerdict::new(PropertyKind::Transient, Verdict::HoldsAtScale, window)
        } else if top >= params.persist * prev {
            PropertyVerdict::new(PropertyKind::Transient, Verdict::FailsAtScale, window)
        } else {
            PropertyVerdict::new(PropertyKind::Transient, Verdict::Inconclusive, window)
                .with_reason("increments_ambiguous")
        }
    };
    Ok((verdict.with_evidence(evidence), profile))
}
