//! Property checkers on subgraphs of a window.
//!
//! "Infinite" is read as "reaches the window boundary" throughout, so every
//! verdict is an at-scale verdict and carries the window radius.

mod cut_points;
mod recurrence;
mod resistance;
mod structure;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cut_points::cut_points;
pub use recurrence::{recurrent_subset_estimate, RecurrenceEstimate};
pub use resistance::{
    effective_resistance, resistance_profile, transience_proxy, Resistance, ResistanceProfile,
    TransienceParams, DENSE_LIMIT,
};
pub use structure::{
    build_pe_counterexample, components, is_connected, is_percolating_everywhere,
    kalikow_weiss_diagnostic, quotient_edge_prob, quotient_graph, ti_check, PeCounterexample,
    QuotientGraph,
};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, LocalGraph, Subgraph, Topology, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyKind {
    Transient,
    FinitelyManyCutPoints,
    NoCutPoints,
    RecurrentSubset,
    Connected,
    PercolatingEverywhere,
    Ti,
    SpansBoundary,
    ContainsEdge,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 9] = [
        PropertyKind::Transient,
        PropertyKind::FinitelyManyCutPoints,
        PropertyKind::NoCutPoints,
        PropertyKind::RecurrentSubset,
        PropertyKind::Connected,
        PropertyKind::PercolatingEverywhere,
        PropertyKind::Ti,
        PropertyKind::SpansBoundary,
        PropertyKind::ContainsEdge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Transient => "transient",
            PropertyKind::FinitelyManyCutPoints => "finitely_many_cut_points",
            PropertyKind::NoCutPoints => "no_cut_points",
            PropertyKind::RecurrentSubset => "recurrent_subset",
            PropertyKind::Connected => "connected",
            PropertyKind::PercolatingEverywhere => "percolating_everywhere",
            PropertyKind::Ti => "ti",
            PropertyKind::SpansBoundary => "spans_boundary",
            PropertyKind::ContainsEdge => "contains_edge",
        }
    }

    /// Whether the property can only hold for connected subgraphs.
    pub fn needs_connected(self) -> bool {
        matches!(self, PropertyKind::Transient)
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PropertyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsAtScale,
    FailsAtScale,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::HoldsAtScale => "holds_at_scale",
            Verdict::FailsAtScale => "fails_at_scale",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            Verdict::HoldsAtScale,
            Verdict::FailsAtScale,
            Verdict::Inconclusive,
        ]
        .into_iter()
        .find(|v| v.name() == s)
        .ok_or_else(|| format!("unknown verdict `{s}`"))
    }
}

/// Outcome of one property check.
///
/// Record form: `property,verdict,window,reason,e1;e2;...` with an empty
/// reason field when there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: PropertyKind,
    pub verdict: Verdict,
    /// Radius of the window the verdict was reached on.
    pub window: usize,
    /// Short code; always present for inconclusive verdicts.
    pub reason: Option<String>,
    pub evidence: Vec<f64>,
}

impl PropertyVerdict {
    /// Inconclusive verdicts get the reason `unspecified` until one is set.
    pub fn new(property: PropertyKind, verdict: Verdict, window: usize) -> Self {
        let reason = (verdict == Verdict::Inconclusive).then(|| "unspecified".to_string());
        PropertyVerdict {
            property,
            verdict,
            window,
            reason,
            evidence: Vec::new(),
        }
    }

    pub fn from_bool(property: PropertyKind, holds: bool, window: usize) -> Self {
        let v = if holds {
            Verdict::HoldsAtScale
        } else {
            Verdict::FailsAtScale
        };
        PropertyVerdict::new(property, v, window)
    }

    pub fn with_reason(mut self, reason: &str) -> Self {
        self.reason = Some(reason.to_string());
        self
    }

    pub fn with_evidence(mut self, evidence: Vec<f64>) -> Self {
        self.evidence = evidence;
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsAtScale
    }

    pub fn to_record(&self) -> String {
        let ev: Vec<String> = self.evidence.iter().map(|x| x.to_string()).collect();
        format!(
            "{},{},{},{},{}",
            self.property,
            self.verdict,
            self.window,
            self.reason.as_deref().unwrap_or(""),
            ev.join(";")
        )
    }

    pub fn from_record(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::parse(1, format!("verdict record: {m}"));
        let f: Vec<&str> = s.split(',').collect();
        if f.len() != 5 {
            return Err(bad("expected 5 comma-separated fields"));
        }
        let property = f[0].parse().map_err(|e: String| bad(&e))?;
        let verdict: Verdict = f[1].parse().map_err(|e: String| bad(&e))?;
        let window = f[2].parse().map_err(|_| bad("bad window"))?;
        let reason = (!f[3].is_empty()).then(|| f[3].to_string());
        if verdict == Verdict::Inconclusive && reason.is_none() {
            return Err(bad("inconclusive verdict without a reason"));
        }
        let evidence = if f[4].is_empty() {
            Vec::new()
        } else {
            f[4].split(';')
                .map(|x| x.parse().map_err(|_| bad("bad evidence value")))
                .collect::<Result<_>>()?
        };
        Ok(PropertyVerdict {
            property,
            verdict,
            window,
            reason,
            evidence,
        })
    }
}

/// A property with its parameters, checked against a subgraph `u` of a window.
#[derive(Debug, Clone, PartialEq)]
pub enum Property {
    Connected,
    /// The component of `u` containing `vertex` (default: window origin)
    /// has a boundary vertex.
    SpansBoundary {
        vertex: Option<VertexId>,
    },
    /// Resistance growth from `center` (default: origin) over `radii`,
    /// measured in `u`'s own metric.
    Transient {
        center: Option<VertexId>,
        radii: Vec<usize>,
        params: TransienceParams,
    },
    /// No cut point of `u` within host distance `radius` of `center`.
    NoCutPoints {
        center: Option<VertexId>,
        radius: usize,
    },
    /// No cut point of `u` at host distance in `(radius / 2, radius]` from
    /// `center`: the cut points seen are confined to a bounded core.
    FinitelyManyCutPoints {
        center: Option<VertexId>,
        radius: usize,
    },
    PercolatingEverywhere,
    /// Visits of an independent walk from `start` (default: origin) to `u`.
    RecurrentSubset {
        start: Option<VertexId>,
        n_walks: usize,
        horizons: Vec<usize>,
        seed: u64,
    },
    ContainsEdge {
        edge: EdgeId,
    },
}

impl Property {
    pub fn kind(&self) -> PropertyKind {
        match self {
            Property::Connected => PropertyKind::Connected,
            Property::SpansBoundary { .. } => PropertyKind::SpansBoundary,
            Property::Transient { .. } => PropertyKind::Transient,
            Property::NoCutPoints { .. } => PropertyKind::NoCutPoints,
            Property::FinitelyManyCutPoints { .. } => PropertyKind::FinitelyManyCutPoints,
            Property::PercolatingEverywhere => PropertyKind::PercolatingEverywhere,
            Property::RecurrentSubset { .. } => PropertyKind::RecurrentSubset,
            Property::ContainsEdge { .. } => PropertyKind::ContainsEdge,
        }
    }

    /// Copy whose internal random stream (walk-based properties only) uses `seed`.
    pub fn with_seed(&self, seed: u64) -> Property {
        match self {
            Property::RecurrentSubset {
                start,
                n_walks,
                horizons,
                ..
            } => Property::RecurrentSubset {
                start: *start,
                n_walks: *n_walks,
                horizons: horizons.clone(),
                seed,
            },
            other => other.clone(),
        }
    }

    /// Whether `u ⊆ u'` implies the verdict can only improve. Coupled sweeps
    /// are exactly monotone for these.
    pub fn is_increasing(&self) -> bool {
        matches!(
            self,
            Property::Connected
                | Property::SpansBoundary { .. }
                | Property::PercolatingEverywhere
                | Property::ContainsEdge { .. }
        )
    }

    pub fn evaluate<T: Topology + ?Sized>(&self, g: &T, u: &Subgraph) -> Result<PropertyVerdict> {
        let window = g.window_radius();
        let kind = self.kind();
        let or_origin = |v: &Option<VertexId>| v.unwrap_or_else(|| g.origin());
        match self {
            Property::Connected => Ok(PropertyVerdict::from_bool(kind, is_connected(u), window)),
            Property::SpansBoundary { vertex } => {
                let x = or_origin(vertex);
                g.check_vertex(x)?;
                let lg = LocalGraph::new(u);
                let holds = match lg.local(x) {
                    None => false,
                    Some(i) => {
                        let d = lg.distances(i);
                        (0..lg.len()).any(|j| d[j] != usize::MAX && g.is_boundary(lg.global(j)))
                    }
                };
                Ok(PropertyVerdict::from_bool(kind, holds, window))
            }
            Property::Transient {
                center,
                radii,
                params,
            } => {
                let c = or_origin(center);
                if !is_connected(u) {
                    return Ok(PropertyVerdict::new(kind, Verdict::Inconclusive, window)
                        .with_reason("out_of_scope"));
                }
                if !u.contains_vertex(c) {
                    return Ok(PropertyVerdict::new(kind, Verdict::Inconclusive, window)
                        .with_reason("center_missing"));
                }
                if u.edge_count() == 0 {
                    return Ok(PropertyVerdict::new(kind, Verdict::FailsAtScale, window)
                        .with_reason("finite_component"));
                }
                Ok(transience_proxy(u, c, radii, *params, window)?.0)
            }
            Property::NoCutPoints { center, radius } => {
                let cps = cut_points(g, u, or_origin(center), *radius)?;
                Ok(PropertyVerdict::from_bool(kind, cps.is_empty(), window)
                    .with_evidence(vec![cps.len() as f64]))
            }
            Property::FinitelyManyCutPoints { center, radius } => {
                let c = or_origin(center);
                let all = cut_points(g, u, c, *radius)?;
                let inner = crate::graph::ball(g, c, radius / 2)?;
                let outer = all
                    .iter()
                    .filter(|v| inner.binary_search(v).is_err())
                    .count();
                Ok(PropertyVerdict::from_bool(kind, outer == 0, window)
                    .with_evidence(vec![all.len() as f64, outer as f64]))
            }
            Property::PercolatingEverywhere => Ok(PropertyVerdict::from_bool(
                kind,
                is_percolating_everywhere(g, u),
                window,
            )),
            Property::RecurrentSubset {
                start,
                n_walks,
                horizons,
                seed,
            } => {
                if u.is_empty() {
                    return Ok(PropertyVerdict::new(kind, Verdict::FailsAtScale, window));
                }
                Ok(recurrent_subset_estimate(g, u, or_origin(start), *n_walks, horizons, *seed)?.0)
            }
            Property::ContainsEdge { edge } => {
                g.check_edge(*edge)?;
                Ok(PropertyVerdict::from_bool(
                    kind,
                    u.contains_edge(*edge),
                    window,
                ))
            }
        }
    }
}
