//! Simple random walks on windows: paths, traces, hitting and Green-function
//! estimates, and the intersection count of two independent walks.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::graph::{ball_distances, EdgeId, SubEdge, Subgraph, Topology, VertexId};
use crate::hash::{derive_seed, Stream};
use crate::percolation::{open_cluster, Configuration};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxSteps,
    HitBoundary,
}

/// Vertices visited by one walk, `vertices[0] == start`, and the edge used
/// for each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    pub start: VertexId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub stopped: StopReason,
}

impl WalkPath {
    pub fn steps(&self) -> usize {
        self.edges.len()
    }
}

/// Two independent walks from one start, glued at time zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedWalk {
    pub forward: WalkPath,
    pub backward: WalkPath,
}

/// Stepping state of a single walk.
pub struct Walker<'g, T: Topology + ?Sized> {
    g: &'g T,
    rng: ChaCha8Rng,
    at: VertexId,
    nb: Vec<(VertexId, EdgeId)>,
}

impl<'g, T: Topology + ?Sized> Walker<'g, T> {
    pub fn new(g: &'g T, start: VertexId, seed: u64) -> Result<Self> {
        g.check_vertex(start)?;
        if g.degree(start) == 0 {
            return Err(Error::IsolatedVertex(start));
        }
        Ok(Walker {
            g,
            rng: ChaCha8Rng::seed_from_u64(seed),
            at: start,
            nb: Vec::with_capacity(16),
        })
    }

    pub fn position(&self) -> VertexId {
        self.at
    }

    /// Moves to a uniformly chosen neighbor.
    #[inline]
    pub fn step(&mut self) -> (VertexId, EdgeId) {
        self.nb.clear();
        self.g.neighbors_into(self.at, &mut self.nb);
        let (w, e) = self.nb[self.rng.gen_range(0..self.nb.len())];
        self.at = w;
        (w, e)
    }
}

pub fn sample_walk<T: Topology + ?Sized>(
    g: &T,
    start: VertexId,
    max_steps: usize,
    seed: u64,
    stop_at_boundary: bool,
) -> Result<WalkPath> {
    let mut walker = Walker::new(g, start, seed)?;
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut stopped = StopReason::MaxSteps;
    if stop_at_boundary && g.is_boundary(start) {
        stopped = StopReason::HitBoundary;
    } else {
        for _ in 0..max_steps {
            let (w, e) = walker.step();
            vertices.push(w);
            edges.push(e);
            if stop_at_boundary && g.is_boundary(w) {
                stopped = StopReason::HitBoundary;
                break;
            }
        }
    }
    Ok(WalkPath {
        start,
        vertices,
        edges,
        stopped,
    })
}

/// Forward and backward halves use independent streams derived from `seed`.
pub fn sample_two_sided_walk<T: Topology + ?Sized>(
    g: &T,
    start: VertexId,
    max_steps: usize,
    seed: u64,
    stop_at_boundary: bool,
) -> Result<TwoSidedWalk> {
    Ok(TwoSidedWalk {
        forward: sample_walk(
            g,
            start,
            max_steps,
            derive_seed(seed, Stream::Walk, 0),
            stop_at_boundary,
        )?,
        backward: sample_walk(
            g,
            start,
            max_steps,
            derive_seed(seed, Stream::Walk, 1),
            stop_at_boundary,
        )?,
    })
}

/// Visited vertices and traversed edges of the given paths.
pub fn trace_subgraph<T: Topology + ?Sized>(g: &T, paths: &[&WalkPath]) -> Result<Subgraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for path in paths {
        g.check_vertex(path.start)?;
        vertices.extend_from_slice(&path.vertices);
        for (i, &e) in path.edges.iter().enumerate() {
            let (a, b) = (path.vertices[i], path.vertices[i + 1]);
            edges.push(SubEdge {
                id: e,
                u: a.min(b),
                v: a.max(b),
            });
        }
    }
    Ok(Subgraph::from_unsorted(vertices, edges))
}

pub fn two_sided_trace<T: Topology + ?Sized>(g: &T, walk: &TwoSidedWalk) -> Result<Subgraph> {
    trace_subgraph(g, &[&walk.forward, &walk.backward])
}

/// Writes one vertex per line, `f` for the forward half and `b` for the
/// backward half (a one-sided walk is all `f`).
pub fn write_walk<W: Write>(
    forward: &WalkPath,
    backward: Option<&WalkPath>,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "enlarge-walk v1")?;
    writeln!(w, "start {}", forward.start)?;
    for (side, path) in [("f", Some(forward)), ("b", backward)] {
        if let Some(path) = path {
            let reason = match path.stopped {
                StopReason::MaxSteps => "max_steps",
                StopReason::HitBoundary => "hit_boundary",
            };
            writeln!(w, "side {side} steps {} stopped {reason}", path.steps())?;
            for v in &path.vertices {
                writeln!(w, "{side} {v}")?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingStats {
    /// Fraction of walks with `S_n` in the target for some `n <= horizon`.
    pub hit_prob: f64,
    /// Visits to the target per walk, counting time 0.
    pub hit_counts: Vec<usize>,
    pub first_hit_times: Vec<Option<usize>>,
    pub last_hit_times: Vec<Option<usize>>,
}

pub fn hitting_stats<T: Topology + ?Sized>(
    g: &T,
    start: VertexId,
    target: &[VertexId],
    n_walks: usize,
    horizon: usize,
    seed: u64,
) -> Result<HittingStats> {
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    for &t in target {
        g.check_vertex(t)?;
    }
    Walker::new(g, start, 0)?;
    let set: FxHashSet<VertexId> = target.iter().copied().collect();
    let per_walk: Vec<(usize, Option<usize>, Option<usize>)> = (0..n_walks)
        .into_par_iter()
        .map(|i| {
            let mut walker =
                Walker::new(g, start, derive_seed(seed, Stream::Walk, i as u64)).unwrap();
            let (mut count, mut first, mut last) = (0, None, None);
            let mut note = |v: VertexId, n: usize| {
                if set.contains(&v) {
                    count += 1;
                    first.get_or_insert(n);
                    last = Some(n);
                }
            };
            note(start, 0);
            for n in 1..=horizon {
                let (w, _) = walker.step();
                note(w, n);
            }
            (count, first, last)
        })
        .collect();
    let hits = per_walk.iter().filter(|w| w.0 > 0).count();
    Ok(HittingStats {
        hit_prob: if n_walks == 0 {
            0.0
        } else {
            hits as f64 / n_walks as f64
        },
        hit_counts: per_walk.iter().map(|w| w.0).collect(),
        first_hit_times: per_walk.iter().map(|w| w.1).collect(),
        last_hit_times: per_walk.iter().map(|w| w.2).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenEstimate {
    pub target: VertexId,
    /// Mean number of times `0..=T` spent at the target (or in its open
    /// cluster when a configuration is given), `T` the horizon or the first
    /// boundary hit.
    pub value: f64,
    pub std_err: f64,
    pub n_walks: usize,
    /// Fraction of walks stopped by the boundary before the horizon.
    pub exit_fraction: f64,
}

pub fn green_estimate<T: Topology + ?Sized>(
    g: &T,
    origin: VertexId,
    target: VertexId,
    n_walks: usize,
    horizon: usize,
    seed: u64,
    cfg: Option<&Configuration>,
) -> Result<GreenEstimate> {
    g.check_vertex(target)?;
    Walker::new(g, origin, 0)?;
    let region: FxHashSet<VertexId> = match cfg {
        Some(cfg) => open_cluster(g, cfg, target)?
            .vertices()
            .iter()
            .copied()
            .collect(),
        None => [target].into_iter().collect(),
    };
    let per_walk: Vec<(f64, bool)> = (0..n_walks)
        .into_par_iter()
        .map(|i| {
            let mut walker =
                Walker::new(g, origin, derive_seed(seed, Stream::Walk, i as u64)).unwrap();
            let mut visits = usize::from(region.contains(&origin));
            let mut exited = g.is_boundary(origin);
            let mut n = 0;
            while !exited && n < horizon {
                let (w, _) = walker.step();
                n += 1;
                visits += usize::from(region.contains(&w));
                exited = g.is_boundary(w);
            }
            (visits as f64, exited && n < horizon)
        })
        .collect();
    let values: Vec<f64> = per_walk.iter().map(|w| w.0).collect();
    let (mean, se) = crate::stats::mean_and_std_err(&values);
    let exits = per_walk.iter().filter(|w| w.1).count();
    Ok(GreenEstimate {
        target,
        value: mean,
        std_err: se,
        n_walks,
        exit_fraction: if n_walks == 0 {
            0.0
        } else {
            exits as f64 / n_walks as f64
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionStats {
    pub k: u32,
    /// Fraction of pairs with `Z_k > 0`.
    pub p_positive: f64,
    pub mean: f64,
    pub n_pairs: usize,
}

/// Step cap for a single walk inside a ball; far beyond the expected exit time
/// of any ball small enough to enumerate.
const EXIT_STEP_CAP: usize = 50_000_000;

/// `Z_k`: vertices of the annulus `B(o, 2^k) \ B(o, 2^(k-1))` visited by both
/// of two independent walks from `o`, each run until it leaves `B(o, 2^k)`.
pub fn intersection_statistic<T: Topology + ?Sized>(
    g: &T,
    k: u32,
    seed: u64,
    n_pairs: usize,
) -> Result<IntersectionStats> {
    let o = g.origin();
    let outer = 1usize
        .checked_shl(k)
        .ok_or_else(|| Error::InvalidParameter(format!("k = {k} too large")))?;
    let inner = outer / 2;
    let dist: FxHashMap<VertexId, usize> = ball_distances(g, o, outer)?.into_iter().collect();
    if !dist.values().any(|&d| d > inner) {
        return Err(Error::InvalidParameter(format!(
            "annulus for k = {k} is empty"
        )));
    }
    Walker::new(g, o, 0)?;
    let in_annulus = |v: VertexId| dist.get(&v).is_some_and(|&d| d > inner);
    let range = |s: u64| {
        let mut walker = Walker::new(g, o, s).unwrap();
        let mut seen = FxHashSet::default();
        for _ in 0..EXIT_STEP_CAP {
            let (w, _) = walker.step();
            if !dist.contains_key(&w) || g.is_boundary(w) {
                break;
            }
            if in_annulus(w) {
                seen.insert(w);
            }
        }
        seen
    };
    let z: Vec<usize> = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let a = range(derive_seed(seed, Stream::Walk, 2 * i as u64));
            let b = range(derive_seed(seed, Stream::Walk, 2 * i as u64 + 1));
            a.iter().filter(|v| b.contains(v)).count()
        })
        .collect();
    let n = n_pairs.max(1) as f64;
    Ok(IntersectionStats {
        k,
        p_positive: z.iter().filter(|&&x| x > 0).count() as f64 / n,
        mean: z.iter().sum::<usize>() as f64 / n,
        n_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_zd_box, FamilyTag, Graph, Lattice, VertexLabel};
    use crate::percolation::sample_config;
    use crate::properties::is_connected;

    fn path2() -> Graph {
        let labels = (0..2).map(VertexLabel::Level).collect();
        Graph::new(
            FamilyTag::Derived { vertices: 2 },
            labels,
            vec![(0, 1)],
            &[],
            0,
        )
        .unwrap()
    }

    #[test]
    fn zero_steps_and_forced_moves() {
        let g = path2();
        let w = sample_walk(&g, 0, 0, 1, false).unwrap();
        assert_eq!(w.vertices, vec![0]);
        for seed in 0..10 {
            assert_eq!(
                sample_walk(&g, 0, 1, seed, false).unwrap().vertices,
                vec![0, 1]
            );
        }
        let lone = Graph::new(
            FamilyTag::Derived { vertices: 1 },
            vec![VertexLabel::Level(0)],
            vec![],
            &[],
            0,
        )
        .unwrap();
        assert_eq!(
            sample_walk(&lone, 0, 3, 1, false),
            Err(Error::IsolatedVertex(0))
        );
    }

    #[test]
    fn paths_are_adjacent_and_deterministic() {
        let g = build_zd_box(3, 5).unwrap();
        let w = sample_walk(&g, g.origin(), 500, 42, true).unwrap();
        assert_eq!(w, sample_walk(&g, g.origin(), 500, 42, true).unwrap());
        for (i, &e) in w.edges.iter().enumerate() {
            let (a, b) = g.endpoints(e).unwrap();
            let (x, y) = (w.vertices[i], w.vertices[i + 1]);
            assert!((a, b) == (x, y) || (a, b) == (y, x));
        }
        if w.stopped == StopReason::HitBoundary {
            assert!(g.is_boundary(*w.vertices.last().unwrap()));
        }
    }

    #[test]
    fn displacement_moments_in_one_dimension() {
        let l = Lattice::new(1, 50).unwrap();
        let o = l.origin();
        let n = 10_000;
        let ends: Vec<f64> = (0..n)
            .map(|i| {
                let w = sample_walk(&l, o, 100, derive_seed(5, Stream::Walk, i), false).unwrap();
                l.coords(*w.vertices.last().unwrap())[0] as f64
            })
            .collect();
        let mean = ends.iter().sum::<f64>() / n as f64;
        let var = ends.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // sd(mean) = 0.1; sd(var) ~ 100 * sqrt(2 / n) = 1.41
        assert!(mean.abs() < 0.3, "mean {mean}");
        assert!((var - 100.0).abs() < 4.3, "var {var}");
    }

    #[test]
    fn steps_are_uniform_over_neighbors() {
        // chi-square with 5 degrees of freedom; 1% critical value 15.09
        let l = Lattice::new(3, 3).unwrap();
        let o = l.origin();
        let mut nb = Vec::new();
        l.neighbors_into(o, &mut nb);
        let mut counts = [0usize; 6];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100_000 {
            let mut w = Walker::new(&l, o, rng.gen()).unwrap();
            let (v, _) = w.step();
            counts[nb.iter().position(|&(x, _)| x == v).unwrap()] += 1;
        }
        let expect = 100_000.0 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 15.09, "chi2 {chi2}");
    }

    #[test]
    fn traces() {
        let g = path2();
        let p = WalkPath {
            start: 0,
            vertices: vec![0],
            edges: vec![],
            stopped: StopReason::MaxSteps,
        };
        let t = trace_subgraph(&g, &[&p]).unwrap();
        assert_eq!((t.vertices(), t.edge_count()), (&[0][..], 0));
        let p = WalkPath {
            start: 0,
            vertices: vec![0, 1, 0],
            edges: vec![0, 0],
            stopped: StopReason::MaxSteps,
        };
        let t = trace_subgraph(&g, &[&p]).unwrap();
        assert_eq!((t.vertices(), t.edge_count()), (&[0, 1][..], 1));

        let z = build_zd_box(3, 20).unwrap();
        let w = sample_walk(&z, z.origin(), 1000, 3, false).unwrap();
        assert!(is_connected(&trace_subgraph(&z, &[&w]).unwrap()));
        let two = sample_two_sided_walk(&z, z.origin(), 1000, 3, false).unwrap();
        assert_ne!(two.forward.vertices, two.backward.vertices);
        assert!(is_connected(&two_sided_trace(&z, &two).unwrap()));
    }

    #[test]
    fn walk_dump_format() {
        let g = path2();
        let two = sample_two_sided_walk(&g, 0, 2, 9, false).unwrap();
        let mut out = Vec::new();
        write_walk(&two.forward, Some(&two.backward), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.starts_with("b ")).count(), 3);
    }

    #[test]
    fn hitting() {
        let g = build_zd_box(3, 24).unwrap();
        let o = g.origin();
        let s = hitting_stats(&g, o, &[o], 10, 100, 1).unwrap();
        assert_eq!(s.hit_prob, 1.0);
        assert!(s.first_hit_times.iter().all(|&t| t == Some(0)));
        assert_eq!(
            hitting_stats(&g, o, &[], 10, 100, 1),
            Err(Error::EmptyTarget)
        );

        let mut nb = Vec::new();
        g.neighbors_into(o, &mut nb);
        let start = Lattice::new(3, 24).unwrap().vertex_at(&[10, 0, 0]).unwrap();
        let target: Vec<_> = nb.iter().map(|x| x.0).collect();
        let s = hitting_stats(&g, start, &target, 400, 1000, 2).unwrap();
        assert!(
            s.hit_prob > 0.0 && s.hit_prob < 1.0,
            "hit prob {}",
            s.hit_prob
        );
    }

    #[test]
    fn green_function() {
        let l = Lattice::new(1, 200).unwrap();
        let o = l.origin();
        let short = green_estimate(&l, o, o, 400, 100, 1, None).unwrap();
        let long = green_estimate(&l, o, o, 400, 10_000, 1, None).unwrap();
        assert!(long.value > short.value + 5.0 * (short.std_err + long.std_err));

        let g = build_zd_box(3, 10).unwrap();
        let o = g.origin();
        let x = g.neighbors(o)[0].0;
        let plain = green_estimate(&g, o, x, 300, 2000, 4, None).unwrap();
        let zero = sample_config(&g, 0.0, 9, &[]).unwrap();
        assert_eq!(
            green_estimate(&g, o, x, 300, 2000, 4, Some(&zero)).unwrap(),
            plain
        );
        let some = sample_config(&g, 0.3, 9, &[]).unwrap();
        assert!(
            green_estimate(&g, o, x, 300, 2000, 4, Some(&some))
                .unwrap()
                .value
                >= plain.value
        );
    }

    // Exact P(Z_k > 0) on Z^1: on Z^1 a walk's range before exit is an
    // interval, so the law of (min, max) at exit determines everything.
    fn z1_positive_probability(k: u32) -> f64 {
        use std::collections::BTreeMap;
        let outer = 1i64 << k;
        let inner = outer / 2;
        let mut mass: BTreeMap<(i64, i64, i64), f64> = BTreeMap::from([((0, 0, 0), 1.0)]);
        let mut exits: BTreeMap<(i64, i64), f64> = BTreeMap::new();
        while mass.values().sum::<f64>() > 1e-15 {
            let mut next = BTreeMap::new();
            for (&(x, lo, hi), &m) in &mass {
                for y in [x - 1, x + 1] {
                    if y.abs() > outer {
                        *exits.entry((lo, hi)).or_insert(0.0) += m / 2.0;
                    } else {
                        *next.entry((y, lo.min(y), hi.max(y))).or_insert(0.0) += m / 2.0;
                    }
                }
            }
            mass = next;
        }
        let hits =
            |(lo, hi): (i64, i64)| -> Vec<i64> { (lo..=hi).filter(|x| x.abs() > inner).collect() };
        let mut p = 0.0;
        for (&a, &ma) in &exits {
            for (&b, &mb) in &exits {
                let (ha, hb) = (hits(a), hits(b));
                if ha.iter().any(|x| hb.contains(x)) {
                    p += ma * mb;
                }
            }
        }
        p
    }

    #[test]
    fn intersections() {
        let l = Lattice::new(1, 64).unwrap();
        for k in [1, 2, 3] {
            let exact = z1_positive_probability(k);
            let n = 4000;
            let s = intersection_statistic(&l, k, 11, n).unwrap();
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!(
                (s.p_positive - exact).abs() < 4.0 * se,
                "k {k}: {} vs {exact}",
                s.p_positive
            );
        }
        assert!((z1_positive_probability(2) - 0.71875).abs() < 1e-12);
        let tiny = Lattice::new(1, 1).unwrap();
        assert!(intersection_statistic(&tiny, 3, 1, 10).is_err());
    }
}
