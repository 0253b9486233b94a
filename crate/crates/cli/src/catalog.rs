//! Built-in experiments. Sizes are kept small enough to run in seconds; scale
//! them with `--window-override` or by editing an exported spec.

use crate::spec::ExperimentSpec;

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    /// The claim the experiment probes.
    pub target: &'static str,
    /// Core operations it exercises.
    pub ops: &'static [&'static str],
    pub toml: &'static str,
}

impl Entry {
    pub fn spec(&self) -> ExperimentSpec {
        ExperimentSpec::from_toml(self.toml).expect("catalog specs parse")
    }
}

pub const CATALOG: &[Entry] = &[
    Entry {
        name: "exact_box",
        target: "Exact probability that two opposite corners of a 3x3 box end up in one enlarged subgraph, as a polynomial in p.",
        ops: &["build_zd_box", "enlarge", "exact_event_prob", "exact_polynomial"],
        toml: r#"
schema_version = 1
name = "exact_box"
seed = 1
[graph]
family = "zd_box"
dim = 2
radius = 1
[h]
recipe = "vertices"
vertices = [0, 8]
[experiment]
kind = "exact"
p_values = ["1/4", "1/2", "3/4"]
[experiment.property]
name = "connected"
"#,
    },
    Entry {
        name: "tree3_sweep",
        target: "The binary-branching tree T3 has critical probability 1/2: the origin reaches the boundary only above it.",
        ops: &["RegularTree", "sample_config", "enlarge", "spans_boundary", "sweep"],
        toml: r#"
schema_version = 1
name = "tree3_sweep"
seed = 11
[graph]
family = "tree"
degree = 3
depth = 12
[h]
recipe = "origin"
[experiment]
kind = "sweep"
trials = 400
[experiment.property]
name = "spans_boundary"
"#,
    },
    Entry {
        name: "tree4_sweep",
        target: "T4 has critical probability 1/3.",
        ops: &["RegularTree", "sample_config", "enlarge", "spans_boundary", "sweep"],
        toml: r#"
schema_version = 1
name = "tree4_sweep"
seed = 12
[graph]
family = "tree"
degree = 4
depth = 10
[h]
recipe = "origin"
[experiment]
kind = "sweep"
trials = 400
[experiment.property]
name = "spans_boundary"
"#,
    },
    Entry {
        name: "pc_z3",
        target: "Finite-size crossings of the origin's cluster on Z^3 approach a single critical value as the box grows.",
        ops: &["Lattice", "invasion_levels", "estimate_pc"],
        toml: r#"
schema_version = 1
name = "pc_z3"
seed = 13
[experiment]
kind = "pc"
sizes = [4, 6, 8]
trials = 200
[experiment.family]
family = "lattice"
dim = 3
"#,
    },
    Entry {
        name: "tree_counterexample",
        target: "Removing one edge of T3 leaves a subgraph that meets every ball yet whose enlargement is connected with probability 1-(1-p)^|cut|, strictly between 0 and 1 for all p in (0,1).",
        ops: &[
            "build_regular_tree",
            "subtree_split",
            "build_pe_counterexample",
            "is_percolating_everywhere",
            "quotient_graph",
            "exact_event_prob",
            "sweep",
        ],
        toml: r#"
schema_version = 1
name = "tree_counterexample"
seed = 14
[graph]
family = "regular_tree"
degree = 3
depth = 8
[experiment]
kind = "counterexample"
trials = 500
grid = ["1/10", "1/4", "1/2", "3/4", "9/10"]
"#,
    },
    Entry {
        name: "glued_counterexample",
        target: "The same two-piece construction on T3 and T4 glued at a vertex.",
        ops: &["build_glued_trees", "build_pe_counterexample", "is_percolating_everywhere", "exact_event_prob", "sweep"],
        toml: r#"
schema_version = 1
name = "glued_counterexample"
seed = 15
[graph]
family = "glued_trees"
d1 = 3
d2 = 4
depth = 6
[experiment]
kind = "counterexample"
trials = 500
grid = ["1/10", "1/4", "1/2", "3/4", "9/10"]
"#,
    },
    Entry {
        name: "line_graph_transience",
        target: "On the line graph with 2k^3 two-edge links between levels k and k+1, the enlarged backbone is transient for every p > 0.",
        ops: &["build_line_graph", "enlarge", "resistance_profile", "transience_proxy"],
        toml: r#"
schema_version = 1
name = "line_graph_transience"
seed = 16
[graph]
family = "line_graph"
levels = 20
[experiment]
kind = "line_transience"
p_values = [0.2, 0.4]
runs = 10
radii = [5, 10, 15, 19]
"#,
    },
    Entry {
        name: "hybrid_transience",
        target: "Z^2 with a transient tree of critical probability 1 attached at the origin: the enlarged origin looks transient only for p near 1.",
        ops: &["build_hybrid_z2_tree", "enlarge", "transience_proxy", "sweep"],
        toml: r#"
schema_version = 1
name = "hybrid_transience"
seed = 17
[graph]
family = "hybrid_z2_tree"
z2_radius = 8
depth = 64
[h]
recipe = "origin"
[experiment]
kind = "sweep"
trials = 50
grid = [0.3, 0.5, 0.7, 0.9, 0.99]
[experiment.property]
name = "transient"
radii = [16, 32, 48, 64]
"#,
    },
    Entry {
        name: "trace_growth_z3",
        target: "The enlarged trace of a walk on Z^3 grows at most quadratically below criticality.",
        ops: &["Lattice", "sample_walk", "trace_subgraph", "enlarge", "growth_exponent"],
        toml: r#"
schema_version = 1
name = "trace_growth_z3"
seed = 18
[graph]
family = "lattice"
dim = 3
radius = 24
[h]
recipe = "trace"
steps = 20000
[experiment]
kind = "growth"
p = 0.1
radii = [4, 8, 12, 16, 24]
trials = 10
"#,
    },
    Entry {
        name: "cut_points_z5",
        target: "The enlarged two-sided trace on Z^5 keeps cut points for small p and loses them for large p.",
        ops: &["Lattice", "sample_two_sided_walk", "two_sided_trace", "enlarge", "cut_points"],
        toml: r#"
schema_version = 1
name = "cut_points_z5"
seed = 19
[graph]
family = "lattice"
dim = 5
radius = 6
[h]
recipe = "two_sided_trace"
steps = 20000
[experiment]
kind = "cut_points"
p_values = [0.03, 0.2]
radius = 3
trials = 10
"#,
    },
    Entry {
        name: "recurrence_z3",
        target: "In Z^3 the enlarged trace is visited by an independent walk infinitely often: visit counts keep growing with the horizon.",
        ops: &["Lattice", "sample_walk", "enlarge", "recurrent_subset_estimate"],
        toml: r#"
schema_version = 1
name = "recurrence_z3"
seed = 20
[graph]
family = "lattice"
dim = 3
radius = 60
[h]
recipe = "trace"
steps = 3000
[experiment]
kind = "recurrence"
p = 0.06
n_walks = 50
horizons = [100, 300, 1000, 3000]
"#,
    },
    Entry {
        name: "recurrence_z5",
        target: "In Z^5 the same visit counts saturate.",
        ops: &["Lattice", "sample_walk", "enlarge", "recurrent_subset_estimate"],
        toml: r#"
schema_version = 1
name = "recurrence_z5"
seed = 21
[graph]
family = "lattice"
dim = 5
radius = 60
[h]
recipe = "trace"
steps = 3000
[experiment]
kind = "recurrence"
p = 0.03
n_walks = 50
horizons = [100, 300, 1000, 3000]
"#,
    },
];

pub fn find(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Human-readable listing for `enlarge list`.
pub fn listing() -> String {
    let mut s = String::new();
    for e in CATALOG {
        let spec = e.spec();
        s.push_str(&format!("{}  [{}]\n", e.name, spec.experiment.kind_name()));
        s.push_str(&format!("    target: {}\n", e.target));
        s.push_str(&format!("    ops:    {}\n", e.ops.join(", ")));
    }
    s
}
