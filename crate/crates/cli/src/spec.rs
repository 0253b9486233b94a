//! Experiment specifications: the TOML schema and its mapping onto core types.

use enlarge_core::graph::{
    build_glued_trees, build_hybrid_z2_tree, build_line_graph, build_regular_tree, build_zd_box,
    default_hybrid_branching, Window,
};
use enlarge_core::properties::TransienceParams;
use enlarge_core::{Lattice, Property, RegularTree, VertexId};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphRecipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<HSpec>,
    pub experiment: Experiment,
}

/// Graph family and size. `lattice` and `tree` are implicit windows; the rest
/// are materialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphRecipe {
    Lattice {
        dim: usize,
        radius: usize,
    },
    Tree {
        degree: usize,
        depth: usize,
    },
    ZdBox {
        dim: usize,
        radius: usize,
    },
    RegularTree {
        degree: usize,
        depth: usize,
    },
    LineGraph {
        levels: usize,
    },
    /// `branching` defaults to the sparse doubling schedule of length `depth`.
    HybridZ2Tree {
        z2_radius: usize,
        depth: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branching: Option<Vec<usize>>,
    },
    GluedTrees {
        d1: usize,
        d2: usize,
        depth: usize,
    },
}

impl GraphRecipe {
    pub fn build(&self) -> enlarge_core::Result<Window> {
        Ok(match self {
            GraphRecipe::Lattice { dim, radius } => Window::Lattice(Lattice::new(*dim, *radius)?),
            GraphRecipe::Tree { degree, depth } => Window::Tree(RegularTree::new(*degree, *depth)?),
            GraphRecipe::ZdBox { dim, radius } => Window::Graph(build_zd_box(*dim, *radius)?),
            GraphRecipe::RegularTree { degree, depth } => {
                Window::Graph(build_regular_tree(*degree, *depth)?)
            }
            GraphRecipe::LineGraph { levels } => Window::Graph(build_line_graph(*levels)?),
            GraphRecipe::HybridZ2Tree {
                z2_radius,
                depth,
                branching,
            } => {
                let b = branching
                    .clone()
                    .unwrap_or_else(|| default_hybrid_branching(*depth));
                Window::Graph(build_hybrid_z2_tree(*z2_radius, &b)?)
            }
            GraphRecipe::GluedTrees { d1, d2, depth } => {
                Window::Graph(build_glued_trees(*d1, *d2, *depth)?)
            }
        })
    }

    /// Replaces the size parameter (radius, depth or levels).
    pub fn with_window(&self, w: usize) -> GraphRecipe {
        let mut g = self.clone();
        match &mut g {
            GraphRecipe::Lattice { radius, .. } | GraphRecipe::ZdBox { radius, .. } => *radius = w,
            GraphRecipe::Tree { depth, .. }
            | GraphRecipe::RegularTree { depth, .. }
            | GraphRecipe::GluedTrees { depth, .. } => *depth = w,
            GraphRecipe::LineGraph { levels } => *levels = w,
            GraphRecipe::HybridZ2Tree { z2_radius, .. } => *z2_radius = w,
        }
        g
    }

    pub fn is_materialized(&self) -> bool {
        !matches!(self, GraphRecipe::Lattice { .. } | GraphRecipe::Tree { .. })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GraphRecipe::Lattice { .. } => "lattice",
            GraphRecipe::Tree { .. } => "tree",
            GraphRecipe::ZdBox { .. } => "zd_box",
            GraphRecipe::RegularTree { .. } => "regular_tree",
            GraphRecipe::LineGraph { .. } => "line_graph",
            GraphRecipe::HybridZ2Tree { .. } => "hybrid_z2_tree",
            GraphRecipe::GluedTrees { .. } => "glued_trees",
        }
    }
}

/// How `H` is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case", deny_unknown_fields)]
pub enum HSpec {
    Origin,
    Vertex {
        vertex: VertexId,
    },
    /// The given vertices with no edges.
    Vertices {
        vertices: Vec<VertexId>,
    },
    Whole,
    /// Line graph only: the levels joined by the first connection of each level.
    Backbone,
    Trace {
        steps: usize,
    },
    TwoSidedTrace {
        steps: usize,
    },
    /// Trees and glued trees only: the spanning two-component subgraph.
    PeCounterexample,
}

impl HSpec {
    /// Whether every sample of the recipe is connected.
    pub fn is_connected(&self) -> bool {
        match self {
            HSpec::PeCounterexample => false,
            HSpec::Vertices { vertices } => vertices.len() <= 1,
            _ => true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HSpec::Origin => "origin",
            HSpec::Vertex { .. } => "vertex",
            HSpec::Vertices { .. } => "vertices",
            HSpec::Whole => "whole",
            HSpec::Backbone => "backbone",
            HSpec::Trace { .. } => "trace",
            HSpec::TwoSidedTrace { .. } => "two_sided_trace",
            HSpec::PeCounterexample => "pe_counterexample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransienceConfig {
    pub eps_tail: f64,
    pub decay: f64,
    pub persist: f64,
}

impl From<TransienceConfig> for TransienceParams {
    fn from(c: TransienceConfig) -> Self {
        TransienceParams {
            eps_tail: c.eps_tail,
            decay: c.decay,
            persist: c.persist,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PropertySpec {
    Connected,
    SpansBoundary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertex: Option<VertexId>,
    },
    Transient {
        radii: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        params: Option<TransienceConfig>,
    },
    NoCutPoints {
        radius: usize,
    },
    FinitelyManyCutPoints {
        radius: usize,
    },
    PercolatingEverywhere,
    RecurrentSubset {
        n_walks: usize,
        horizons: Vec<usize>,
    },
    ContainsEdge {
        edge: usize,
    },
}

impl PropertySpec {
    pub fn to_property(&self) -> Property {
        match self {
            PropertySpec::Connected => Property::Connected,
            PropertySpec::SpansBoundary { vertex } => Property::SpansBoundary { vertex: *vertex },
            PropertySpec::Transient { radii, params } => Property::Transient {
                center: None,
                radii: radii.clone(),
                params: params.map(Into::into).unwrap_or_default(),
            },
            PropertySpec::NoCutPoints { radius } => Property::NoCutPoints {
                center: None,
                radius: *radius,
            },
            PropertySpec::FinitelyManyCutPoints { radius } => Property::FinitelyManyCutPoints {
                center: None,
                radius: *radius,
            },
            PropertySpec::PercolatingEverywhere => Property::PercolatingEverywhere,
            // the per-trial seed replaces this one
            PropertySpec::RecurrentSubset { n_walks, horizons } => Property::RecurrentSubset {
                start: None,
                n_walks: *n_walks,
                horizons: horizons.clone(),
                seed: 0,
            },
            PropertySpec::ContainsEdge { edge } => Property::ContainsEdge { edge: *edge },
        }
    }
}

/// What to run, with the estimator settings it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// Coupled sweep of `P_p(U(H) has the property)` over a grid.
    Sweep {
        property: PropertySpec,
        trials: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
    },
    /// Finite-size critical probability of the origin's cluster. Builds its
    /// own windows; takes no `[graph]`.
    Pc {
        family: PcFamilySpec,
        sizes: Vec<usize>,
        trials: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<f64>>,
    },
    /// Ball-growth exponent of `U(H)` around the origin.
    Growth {
        p: f64,
        radii: Vec<usize>,
        trials: u64,
    },
    /// Cut points of `U(H)` within `radius` of the origin, per `p`.
    CutPoints {
        p_values: Vec<f64>,
        radius: usize,
        trials: u64,
    },
    /// Visit counts of an independent walk to `U(H)` at `p`.
    Recurrence {
        p: f64,
        n_walks: usize,
        horizons: Vec<usize>,
    },
    /// Line graph with `H` = backbone: open two-edge connections per level
    /// and the transience proxy of `U(H)`.
    LineTransience {
        p_values: Vec<f64>,
        runs: u64,
        radii: Vec<usize>,
        /// Allowed probability that some level at or past `k0` fails the
        /// count bound, used to pick `k0` from the binomial law.
        #[serde(default = "default_level_risk")]
        level_risk: f64,
    },
    /// Exact and Monte Carlo connectivity of the two-component `H` on a
    /// rational grid.
    Counterexample {
        trials: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
    },
    /// Exact enumeration on a small window.
    Exact {
        property: PropertySpec,
        p_values: Vec<String>,
    },
}

fn default_level_risk() -> f64 {
    0.01
}

impl Experiment {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Experiment::Sweep { .. } => "sweep",
            Experiment::Pc { .. } => "pc",
            Experiment::Growth { .. } => "growth",
            Experiment::CutPoints { .. } => "cut_points",
            Experiment::Recurrence { .. } => "recurrence",
            Experiment::LineTransience { .. } => "line_transience",
            Experiment::Counterexample { .. } => "counterexample",
            Experiment::Exact { .. } => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PcFamilySpec {
    Lattice { dim: usize },
    Tree { degree: usize },
}

impl From<PcFamilySpec> for enlarge_core::estimators::PcFamily {
    fn from(f: PcFamilySpec) -> Self {
        match f {
            PcFamilySpec::Lattice { dim } => enlarge_core::estimators::PcFamily::Lattice { dim },
            PcFamilySpec::Tree { degree } => enlarge_core::estimators::PcFamily::Tree { degree },
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Canonical serialization; comments and key order in the source do not
    /// affect it.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Copy with the command-line overrides applied.
    pub fn with_overrides(&self, seed: Option<u64>, window: Option<usize>) -> ExperimentSpec {
        let mut s = self.clone();
        if let Some(seed) = seed {
            s.seed = seed;
        }
        if let (Some(w), Some(g)) = (window, &s.graph) {
            s.graph = Some(g.with_window(w));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
schema_version = 1
name = "t3"
seed = 5

[graph]
family = "tree"
degree = 3
depth = 8

[h]
recipe = "origin"

[experiment]
kind = "sweep"
trials = 100

[experiment.property]
name = "spans_boundary"
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = ExperimentSpec::from_toml(SAMPLE).unwrap();
        assert_eq!(
            s.graph,
            Some(GraphRecipe::Tree {
                degree: 3,
                depth: 8
            })
        );
        assert_eq!(s.h, Some(HSpec::Origin));
        let Experiment::Sweep {
            property,
            trials,
            grid,
            ..
        } = &s.experiment
        else {
            panic!()
        };
        assert_eq!(
            (property, *trials, grid),
            (&PropertySpec::SpansBoundary { vertex: None }, 100, &None)
        );
        let again = ExperimentSpec::from_toml(&s.to_toml()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.hash(), s.hash());
        assert_eq!(s.hash().len(), 64);
    }

    #[test]
    fn hash_ignores_layout_but_not_values() {
        let s = ExperimentSpec::from_toml(SAMPLE).unwrap();
        let commented = format!("# a comment\n{SAMPLE}");
        assert_eq!(
            ExperimentSpec::from_toml(&commented).unwrap().hash(),
            s.hash()
        );
        assert_ne!(s.with_overrides(Some(6), None).hash(), s.hash());
    }

    #[test]
    fn overrides() {
        let s = ExperimentSpec::from_toml(SAMPLE)
            .unwrap()
            .with_overrides(Some(9), Some(4));
        assert_eq!(s.seed, 9);
        assert_eq!(
            s.graph,
            Some(GraphRecipe::Tree {
                degree: 3,
                depth: 4
            })
        );
    }

    #[test]
    fn unknown_names_are_parse_errors() {
        assert!(ExperimentSpec::from_toml(&SAMPLE.replace("spans_boundary", "pretty")).is_err());
        assert!(ExperimentSpec::from_toml(&SAMPLE.replace("\"tree\"", "\"torus\"")).is_err());
        assert!(
            ExperimentSpec::from_toml(&SAMPLE.replace("seed = 5", "seed = 5\ncolour = 1")).is_err()
        );
    }

    #[test]
    fn builds_windows() {
        let w = GraphRecipe::HybridZ2Tree {
            z2_radius: 3,
            depth: 5,
            branching: None,
        }
        .build()
        .unwrap();
        assert!(matches!(w, Window::Graph(_)));
        assert!(GraphRecipe::Lattice { dim: 0, radius: 3 }.build().is_err());
    }
}
