//! Monte Carlo estimation of `P_p(U(H) has property P)`, coupled sweeps over
//! `p`, threshold extraction and critical-probability calibration.
//!
//! Trial `i` draws its configuration from `derive_seed(master, Percolation, i)`
//! and its random `H` from `derive_seed(master, Subgraph, i)`, so results do
//! not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LocalGraph, Subgraph, Topology, VertexId, Window};
use crate::hash::{derive_seed, Stream};
use crate::percolation::{enlarge, invasion_levels, sample_config};
use crate::properties::{is_connected, Property, Verdict};
use crate::stats::{linear_fit, mean_and_std_err, wilson};
use crate::walks::{sample_two_sided_walk, sample_walk, trace_subgraph, two_sided_trace};

/// Share of inconclusive verdicts above which an estimate is flagged.
pub const INCONCLUSIVE_LIMIT: f64 = 0.2;
pub const DEFAULT_DELTA: f64 = 0.01;

/// The 21-point grid `i / 22`.
pub fn default_grid() -> Vec<f64> {
    (1..=21).map(|i| i as f64 / 22.0).collect()
}

/// How the subgraph `H` is obtained for each trial.
#[derive(Debug, Clone, PartialEq)]
pub enum HRecipe {
    Fixed(Subgraph),
    /// Trace of a walk from `start` (default: origin), stopped after `steps`
    /// steps or at the boundary.
    Trace {
        start: Option<VertexId>,
        steps: usize,
    },
    /// Union of two independent such traces from the same start.
    TwoSidedTrace {
        start: Option<VertexId>,
        steps: usize,
    },
}

impl HRecipe {
    pub fn is_random(&self) -> bool {
        !matches!(self, HRecipe::Fixed(_))
    }

    pub fn sample<T: Topology + ?Sized>(&self, g: &T, seed: u64) -> Result<Subgraph> {
        match self {
            HRecipe::Fixed(h) => Ok(h.clone()),
            HRecipe::Trace { start, steps } => {
                let w = sample_walk(g, start.unwrap_or_else(|| g.origin()), *steps, seed, true)?;
                trace_subgraph(g, &[&w])
            }
            HRecipe::TwoSidedTrace { start, steps } => {
                let w = sample_two_sided_walk(
                    g,
                    start.unwrap_or_else(|| g.origin()),
                    *steps,
                    seed,
                    true,
                )?;
                two_sided_trace(g, &w)
            }
        }
    }
}

/// Graph, `H` recipe and property of one estimation problem.
pub struct EventSpec<'a, T: Topology + ?Sized> {
    pub graph: &'a T,
    pub h: HRecipe,
    pub property: Property,
}

impl<'a, T: Topology + ?Sized> EventSpec<'a, T> {
    pub fn new(graph: &'a T, h: HRecipe, property: Property) -> Self {
        EventSpec { graph, h, property }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbEstimate {
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub inconclusive: u64,
    pub point: f64,
    /// Wilson 95% bounds.
    pub ci_low: f64,
    pub ci_high: f64,
    /// More than [`INCONCLUSIVE_LIMIT`] of the verdicts were inconclusive.
    pub flagged: bool,
}

impl ProbEstimate {
    pub fn from_counts(p: f64, trials: u64, successes: u64, inconclusive: u64) -> Self {
        let (ci_low, ci_high) = wilson(successes, trials, 0.95);
        ProbEstimate {
            p,
            trials,
            successes,
            inconclusive,
            point: if trials == 0 {
                0.0
            } else {
                successes as f64 / trials as f64
            },
            ci_low,
            ci_high,
            flagged: inconclusive as f64 > INCONCLUSIVE_LIMIT * trials as f64,
        }
    }
}

/// `(subgraph, percolation, auxiliary)` seeds of trial `i`.
pub fn trial_seeds(master: u64, i: u64) -> (u64, u64, u64) {
    (
        derive_seed(master, Stream::Subgraph, i),
        derive_seed(master, Stream::Percolation, i),
        derive_seed(master, Stream::Auxiliary, i),
    )
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::InvalidParameter("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Independent trials at one `p`; success iff the verdict holds at scale.
pub fn estimate_event_prob<T: Topology + ?Sized>(
    spec: &EventSpec<T>,
    p: f64,
    trials: u64,
    master_seed: u64,
) -> Result<ProbEstimate> {
    check_trials(trials)?;
    let g = spec.graph;
    let verdicts: Vec<Verdict> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (hs, cs, aux) = trial_seeds(master_seed, i);
            let h = spec.h.sample(g, hs)?;
            let cfg = sample_config(g, p, cs, &[])?;
            let u = enlarge(g, &h, &cfg);
            Ok(spec.property.with_seed(aux).evaluate(g, &u)?.verdict)
        })
        .collect::<Result<_>>()?;
    let successes = verdicts
        .iter()
        .filter(|&&v| v == Verdict::HoldsAtScale)
        .count() as u64;
    let inconclusive = verdicts
        .iter()
        .filter(|&&v| v == Verdict::Inconclusive)
        .count() as u64;
    Ok(ProbEstimate::from_counts(
        p,
        trials,
        successes,
        inconclusive,
    ))
}

/// Threshold extracted from a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum Threshold {
    /// First grid point satisfying the rule, which is not the smallest one.
    At(f64),
    /// The rule already holds at the smallest grid point.
    BelowGrid(f64),
    /// The rule holds nowhere on the grid.
    AboveGrid(f64),
}

impl Threshold {
    /// Position on the `p` axis, with open-ended reports pushed just outside
    /// the grid so that ordering comparisons work.
    pub fn sort_key(&self) -> f64 {
        match *self {
            Threshold::At(p) => p,
            Threshold::BelowGrid(p) => p - 1e-9,
            Threshold::AboveGrid(p) => p + 1e-9,
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::At(p) => write!(f, "{p}"),
            Threshold::BelowGrid(p) => write!(f, "<{p}"),
            Threshold::AboveGrid(p) => write!(f, ">{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub estimates: Vec<ProbEstimate>,
    pub window_radius: usize,
    /// All grid points share per-edge uniforms.
    pub coupled: bool,
    pub p_hat_c1: Threshold,
    pub p_hat_c2: Threshold,
    /// The two thresholds fall on the same grid point.
    pub thresholds_coincide: bool,
}

/// `p_hat_c1`: first grid `p` with `ci_low > delta`. `p_hat_c2`: first with
/// `ci_high > 1 - delta` and `point >= 1 - 2 delta`. Rejects uncoupled input
/// whose point estimates decrease somewhere.
pub fn extract_thresholds(
    estimates: &[ProbEstimate],
    delta: f64,
    coupled: bool,
) -> Result<(Threshold, Threshold)> {
    if estimates.is_empty() {
        return Err(Error::InvalidParameter("empty sweep".into()));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} outside [0, 0.5)"
        )));
    }
    if estimates.windows(2).any(|w| w[0].p >= w[1].p) {
        return Err(Error::InvalidParameter(
            "grid must be strictly increasing".into(),
        ));
    }
    if !coupled && estimates.windows(2).any(|w| w[1].point < w[0].point) {
        return Err(Error::Precondition(
            "uncoupled sweep is not monotone".into(),
        ));
    }
    let first = |rule: &dyn Fn(&ProbEstimate) -> bool| match estimates.iter().position(rule) {
        Some(0) => Threshold::BelowGrid(estimates[0].p),
        Some(i) => Threshold::At(estimates[i].p),
        None => Threshold::AboveGrid(estimates[estimates.len() - 1].p),
    };
    let c1 = first(&|e| e.ci_low > delta);
    let c2 = first(&|e| e.ci_high > 1.0 - delta && e.point >= 1.0 - 2.0 * delta);
    Ok((c1, c2))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.iter().any(|&p| !(p > 0.0 && p < 1.0))
        || grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParameter(
            "grid must be strictly increasing inside (0, 1)".into(),
        ));
    }
    Ok(())
}

/// Exact threshold of the trial when the property is "the component of `x`
/// reaches the boundary" and `h` is connected and contains `x`: the event
/// then holds iff `p > t`.
fn spans_threshold<T: Topology + ?Sized>(
    g: &T,
    property: &Property,
    h: &Subgraph,
    seed: u64,
) -> Option<f64> {
    let Property::SpansBoundary { vertex } = property else {
        return None;
    };
    let x = vertex.unwrap_or_else(|| g.origin());
    if !h.contains_vertex(x) || !is_connected(h) {
        return None;
    }
    let t = invasion_levels(g, seed, h.vertices(), |v| usize::from(g.is_boundary(v)), 1);
    Some(t[1])
}

/// Coupled sweep: each trial fixes `H` and the per-edge uniforms and
/// thresholds them at every grid point.
pub fn sweep<T: Topology + ?Sized>(
    spec: &EventSpec<T>,
    grid: &[f64],
    trials: u64,
    master_seed: u64,
    delta: f64,
) -> Result<SweepResult> {
    check_trials(trials)?;
    check_grid(grid)?;
    let g = spec.graph;
    let rows: Vec<Vec<Verdict>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (hs, cs, aux) = trial_seeds(master_seed, i);
            let h = spec.h.sample(g, hs)?;
            if let Some(t) = spans_threshold(g, &spec.property, &h, cs) {
                return Ok(grid
                    .iter()
                    .map(|&p| {
                        if p > t {
                            Verdict::HoldsAtScale
                        } else {
                            Verdict::FailsAtScale
                        }
                    })
                    .collect());
            }
            let property = spec.property.with_seed(aux);
            let base = sample_config(g, grid[0], cs, &[])?;
            grid.iter()
                .map(|&p| {
                    let u = enlarge(g, &h, &base.at(p)?);
                    Ok(property.evaluate(g, &u)?.verdict)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let estimates: Vec<ProbEstimate> = grid
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let s = rows
                .iter()
                .filter(|r| r[j] == Verdict::HoldsAtScale)
                .count() as u64;
            let inc = rows
                .iter()
                .filter(|r| r[j] == Verdict::Inconclusive)
                .count() as u64;
            ProbEstimate::from_counts(p, trials, s, inc)
        })
        .collect();
    let (p_hat_c1, p_hat_c2) = extract_thresholds(&estimates, delta, true)?;
    Ok(SweepResult {
        grid: grid.to_vec(),
        estimates,
        window_radius: g.window_radius(),
        coupled: true,
        thresholds_coincide: p_hat_c1 == p_hat_c2,
        p_hat_c1,
        p_hat_c2,
    })
}

/// Graph family for [`estimate_pc`]; windows are built implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PcFamily {
    Lattice { dim: usize },
    Tree { degree: usize },
}

impl PcFamily {
    pub fn window(&self, radius: usize) -> Result<Window> {
        Ok(match *self {
            PcFamily::Lattice { dim } => Window::Lattice(crate::graph::Lattice::new(dim, radius)?),
            PcFamily::Tree { degree } => {
                Window::Tree(crate::graph::RegularTree::new(degree, radius)?)
            }
        })
    }
}

/// Finite-size critical-probability estimates for the origin's cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub family: PcFamily,
    pub sizes: Vec<usize>,
    pub trials: u64,
    /// Radius of the single window all sizes are read from (twice the largest size).
    pub window_radius: usize,
    /// Per size, the `p` where `P(cluster reaches distance n)` crosses 1/2.
    pub half_crossings: Vec<f64>,
    /// Per size, the `p` where `P(reaches 2n) / P(reaches n)` crosses 1/2.
    pub survival_crossings: Vec<f64>,
    /// Intercept of `x_n = x + a / n` fitted to each sequence.
    pub half_extrapolated: f64,
    pub survival_extrapolated: f64,
    /// max - min of each sequence.
    pub half_spread: f64,
    pub survival_spread: f64,
    /// Per size, the grid sweep of `P(cluster reaches distance n)`.
    pub sweeps: Vec<SweepResult>,
}

impl PcEstimate {
    /// Reference value used downstream: the extrapolated survival crossing.
    pub fn reference(&self) -> f64 {
        self.survival_extrapolated
    }

    pub fn half_is_monotone(&self) -> bool {
        self.half_crossings.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Sample median, as the midpoint of the two central order statistics.
fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Number of samples strictly below `p`.
fn below(sorted: &[f64], p: f64) -> usize {
    sorted.partition_point(|&t| t < p)
}

const SURVIVAL_GRID: usize = 4000;

/// First point of a fine grid where the conditional survival ratio reaches
/// 1/2, linearly interpolated. Points where fewer than `max(20, N / 100)`
/// trials reach `n` are skipped.
fn survival_crossing(near: &[f64], far: &[f64]) -> f64 {
    let min_count = (near.len() / 100).max(20);
    let ratio = |p: f64| {
        let d = below(near, p);
        (d >= min_count).then(|| below(far, p) as f64 / d as f64)
    };
    let mut prev: Option<(f64, f64)> = None;
    for j in 1..SURVIVAL_GRID {
        let p = j as f64 / SURVIVAL_GRID as f64;
        let Some(r) = ratio(p) else { continue };
        if r >= 0.5 {
            return match prev {
                Some((p0, r0)) if r > r0 => p0 + (0.5 - r0) / (r - r0) * (p - p0),
                _ => p,
            };
        }
        prev = Some((p, r));
    }
    1.0
}

fn extrapolate(sizes: &[usize], xs: &[f64]) -> f64 {
    let inv: Vec<f64> = sizes.iter().map(|&n| 1.0 / n as f64).collect();
    linear_fit(&inv, xs).map_or(xs[xs.len() - 1], |f| f.intercept)
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// One invasion per trial on a window of radius `2 max(sizes)` gives the
/// exact threshold for reaching every distance; all sizes and grid points
/// are read from these thresholds, so the estimates are coupled across both.
pub fn estimate_pc(
    family: PcFamily,
    sizes: &[usize],
    p_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<PcEstimate> {
    if sizes.len() < 2 || sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "need at least two positive, increasing sizes".into(),
        ));
    }
    check_trials(trials)?;
    check_grid(p_grid)?;
    let radius = 2 * sizes[sizes.len() - 1];
    let window = family.window(radius)?;
    let origin = window.origin();
    let levels: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, Stream::Percolation, i);
            invasion_levels(
                &window,
                s,
                &[origin],
                |v| window.shell(v).expect("implicit window"),
                radius,
            )
        })
        .collect();
    let column = |n: usize| {
        let mut c: Vec<f64> = levels.iter().map(|t| t[n]).collect();
        c.sort_by(f64::total_cmp);
        c
    };
    let mut half = Vec::new();
    let mut survival = Vec::new();
    let mut sweeps = Vec::new();
    for &n in sizes {
        let near = column(n);
        let far = column(2 * n);
        half.push(median(&near).clamp(0.0, 1.0));
        survival.push(survival_crossing(&near, &far));
        let estimates: Vec<ProbEstimate> = p_grid
            .iter()
            .map(|&p| ProbEstimate::from_counts(p, trials, below(&near, p) as u64, 0))
            .collect();
        let (c1, c2) = extract_thresholds(&estimates, DEFAULT_DELTA, true)?;
        sweeps.push(SweepResult {
            grid: p_grid.to_vec(),
            estimates,
            window_radius: n,
            coupled: true,
            thresholds_coincide: c1 == c2,
            p_hat_c1: c1,
            p_hat_c2: c2,
        });
    }
    Ok(PcEstimate {
        family,
        sizes: sizes.to_vec(),
        trials,
        window_radius: radius,
        half_extrapolated: extrapolate(sizes, &half),
        survival_extrapolated: extrapolate(sizes, &survival),
        half_spread: spread(&half),
        survival_spread: spread(&survival),
        half_crossings: half,
        survival_crossings: survival,
        sweeps,
    })
}

/// Ball-growth fit of `U(H)` in its own metric around the window origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub radii: Vec<usize>,
    /// Per trial, slope of `ln |B(o, n)|` against `ln n`.
    pub slopes: Vec<f64>,
    pub mean_slope: f64,
    pub std_err: f64,
    /// Per radius, mean of `ln |B(o, n)|` over trials.
    pub mean_log_volume: Vec<f64>,
}

pub fn growth_exponent<T: Topology + ?Sized>(
    g: &T,
    h: &HRecipe,
    p: f64,
    radii: &[usize],
    trials: u64,
    seed: u64,
) -> Result<GrowthFit> {
    if radii.len() < 2 || radii[0] == 0 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "radii must be at least two positive, increasing values".into(),
        ));
    }
    check_trials(trials)?;
    let o = g.origin();
    let x: Vec<f64> = radii.iter().map(|&n| (n as f64).ln()).collect();
    let logs: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (hs, cs, _) = trial_seeds(seed, i);
            let u = enlarge(g, &h.sample(g, hs)?, &sample_config(g, p, cs, &[])?);
            let lg = LocalGraph::new(&u);
            let c = lg
                .local(o)
                .ok_or_else(|| Error::Precondition("origin not in U(H)".into()))?;
            let mut d: Vec<usize> = lg
                .distances(c)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .collect();
            d.sort_unstable();
            Ok(radii
                .iter()
                .map(|&n| (d.partition_point(|&k| k <= n) as f64).ln())
                .collect())
        })
        .collect::<Result<_>>()?;
    let slopes: Vec<f64> = logs
        .iter()
        .map(|y| linear_fit(&x, y).expect("distinct radii").slope)
        .collect();
    let (mean_slope, std_err) = mean_and_std_err(&slopes);
    let mean_log_volume = (0..radii.len())
        .map(|j| logs.iter().map(|y| y[j]).sum::<f64>() / trials as f64)
        .collect();
    Ok(GrowthFit {
        radii: radii.to_vec(),
        slopes,
        mean_slope,
        std_err,
        mean_log_volume,
    })
}
