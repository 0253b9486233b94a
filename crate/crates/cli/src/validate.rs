//! Static checks on a spec. `run` refuses any spec with a non-empty report.

use std::fmt;

use enlarge_core::exact::MAX_FREE_EDGES;
use enlarge_core::graph::{default_hybrid_branching, MAX_MATERIALIZED};
use enlarge_core::{Lattice, RegularTree, Topology};
use num_rational::BigRational;

use crate::spec::{
    Experiment, ExperimentSpec, GraphRecipe, HSpec, PcFamilySpec, PropertySpec, SCHEMA_VERSION,
};

/// Largest trial (or run) count accepted.
pub const MAX_TRIALS: u64 = 10_000_000;
/// Largest materialized window an exact experiment may ask for.
const EXACT_GRAPH_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// Dotted location in the spec, e.g. `experiment.grid`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub issues: Vec<Issue>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            path: path.to_string(),
            message: message.into(),
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.issues {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Parses and checks spec text. Parse failures (including unknown family,
/// recipe, property or kind names) become a single issue at `spec`.
pub fn validate_text(text: &str) -> (Option<ExperimentSpec>, Report) {
    match ExperimentSpec::from_toml(text) {
        Ok(spec) => {
            let report = validate(&spec);
            (Some(spec), report)
        }
        Err(e) => {
            let mut r = Report::default();
            r.push("spec", e.message().to_string());
            (None, r)
        }
    }
}

/// `(vertices, edges)` of the window, or an explanation of why it cannot be built.
fn window_size(g: &GraphRecipe) -> Result<(usize, usize), String> {
    let too_big = || "window size overflows".to_string();
    let lattice = |dim, radius| Lattice::new(dim, radius).map_err(|e| e.to_string());
    let tree = |degree, depth| RegularTree::new(degree, depth).map_err(|e| e.to_string());
    match g {
        GraphRecipe::Lattice { dim, radius } | GraphRecipe::ZdBox { dim, radius } => {
            let l = lattice(*dim, *radius)?;
            Ok((l.vertex_count(), l.edge_count()))
        }
        GraphRecipe::Tree { degree, depth } | GraphRecipe::RegularTree { degree, depth } => {
            let t = tree(*degree, *depth)?;
            Ok((t.vertex_count(), t.edge_count()))
        }
        GraphRecipe::LineGraph { levels } => {
            if *levels == 0 {
                return Err("line graph needs at least one level".into());
            }
            let mut mids = 1usize;
            for k in 1..*levels {
                let c = k
                    .checked_pow(3)
                    .and_then(|x| x.checked_mul(2))
                    .ok_or_else(too_big)?;
                mids = mids.checked_add(c).ok_or_else(too_big)?;
            }
            Ok((levels + 1 + mids, mids.checked_mul(2).ok_or_else(too_big)?))
        }
        GraphRecipe::HybridZ2Tree {
            z2_radius,
            depth,
            branching,
        } => {
            let l = lattice(2, *z2_radius)?;
            let b = branching
                .clone()
                .unwrap_or_else(|| default_hybrid_branching(*depth));
            if b.len() != *depth {
                return Err(format!(
                    "branching has {} entries, depth is {depth}",
                    b.len()
                ));
            }
            if b.contains(&0) {
                return Err("branching entries must be >= 1".into());
            }
            let (mut size, mut width) = (0usize, 1usize);
            for x in b {
                width = width.checked_mul(x).ok_or_else(too_big)?;
                size = size.checked_add(width).ok_or_else(too_big)?;
            }
            Ok((l.vertex_count() + size, l.edge_count() + size))
        }
        GraphRecipe::GluedTrees { d1, d2, depth } => {
            let a = tree(*d1, *depth)?;
            let b = tree(*d2, *depth)?;
            let n = a
                .vertex_count()
                .checked_add(b.vertex_count())
                .ok_or_else(too_big)?
                - 1;
            Ok((n, n - 1))
        }
    }
}

fn check_graph(g: &GraphRecipe, r: &mut Report) -> Option<(usize, usize)> {
    match g {
        GraphRecipe::Lattice { radius, .. } | GraphRecipe::ZdBox { radius, .. } if *radius == 0 => {
            r.push("graph.radius", "must be >= 1");
            return None;
        }
        GraphRecipe::Tree { depth, .. }
        | GraphRecipe::RegularTree { depth, .. }
        | GraphRecipe::GluedTrees { depth, .. }
            if *depth == 0 =>
        {
            r.push("graph.depth", "must be >= 1");
            return None;
        }
        _ => {}
    }
    match window_size(g) {
        Ok((v, e)) => {
            if g.is_materialized() && v.checked_add(e).map_or(true, |t| t > MAX_MATERIALIZED) {
                r.push(
                    "graph",
                    format!("{v} vertices and {e} edges exceed the materialization budget"),
                );
                return None;
            }
            Some((v, e))
        }
        Err(m) => {
            r.push("graph", m);
            None
        }
    }
}

fn check_h(h: &HSpec, g: &GraphRecipe, vertices: Option<usize>, r: &mut Report) {
    match h {
        HSpec::Vertex { vertex } => {
            if vertices.is_some_and(|n| *vertex >= n) {
                r.push("h.vertex", format!("vertex {vertex} is not in the window"));
            }
        }
        HSpec::Vertices { vertices: vs } => {
            if vs.is_empty() {
                r.push("h.vertices", "need at least one vertex");
            }
            if let Some(v) = vs.iter().find(|&&v| vertices.is_some_and(|n| v >= n)) {
                r.push("h.vertices", format!("vertex {v} is not in the window"));
            }
        }
        HSpec::Backbone if !matches!(g, GraphRecipe::LineGraph { .. }) => {
            r.push("h.recipe", "backbone needs a line_graph window");
        }
        HSpec::PeCounterexample
            if !matches!(
                g,
                GraphRecipe::RegularTree { .. } | GraphRecipe::GluedTrees { .. }
            ) =>
        {
            r.push(
                "h.recipe",
                "pe_counterexample needs a regular_tree or glued_trees window",
            );
        }
        _ => {}
    }
}

fn check_prob(p: f64, path: &str, r: &mut Report) {
    if !(0.0..=1.0).contains(&p) {
        r.push(path, format!("p = {p} is outside [0, 1]"));
    }
}

fn check_grid(grid: &[f64], path: &str, r: &mut Report) {
    if grid.is_empty() {
        r.push(path, "grid is empty");
    } else if grid.iter().any(|&p| !(p > 0.0 && p < 1.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        r.push(path, "grid must be strictly increasing inside (0, 1)");
    }
}

fn check_count(n: u64, path: &str, r: &mut Report) {
    if n == 0 {
        r.push(path, "must be >= 1");
    } else if n > MAX_TRIALS {
        r.push(path, format!("{n} exceeds the budget of {MAX_TRIALS}"));
    }
}

fn check_increasing(xs: &[usize], min_len: usize, path: &str, r: &mut Report) {
    if xs.len() < min_len || xs[0] == 0 || xs.windows(2).any(|w| w[0] >= w[1]) {
        r.push(
            path,
            format!("need at least {min_len} positive, strictly increasing values"),
        );
    }
}

fn check_delta(delta: Option<f64>, r: &mut Report) {
    if let Some(d) = delta {
        if !(0.0..0.5).contains(&d) {
            r.push(
                "experiment.delta",
                format!("delta = {d} is outside [0, 0.5)"),
            );
        }
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse::<BigRational>().ok()
}

fn check_property(p: &PropertySpec, h: Option<&HSpec>, r: &mut Report) {
    match p {
        PropertySpec::Transient { radii, params } => {
            check_increasing(radii, 3, "experiment.property.radii", r);
            if let Some(c) = params {
                if !(c.eps_tail > 0.0 && c.decay > 0.0 && c.persist > 0.0) {
                    r.push("experiment.property.params", "parameters must be positive");
                }
            }
            if let Some(h) = h.filter(|h| !h.is_connected()) {
                r.push(
                    "experiment.property",
                    format!("out of scope: transient is defined for connected subgraphs, recipe `{}` is not", h.name()),
                );
            }
        }
        PropertySpec::RecurrentSubset { n_walks, horizons } => {
            if *n_walks < 2 {
                r.push("experiment.property.n_walks", "need at least 2 walks");
            }
            check_increasing(horizons, 3, "experiment.property.horizons", r);
        }
        PropertySpec::NoCutPoints { .. }
        | PropertySpec::FinitelyManyCutPoints { .. }
        | PropertySpec::Connected
        | PropertySpec::SpansBoundary { .. }
        | PropertySpec::PercolatingEverywhere
        | PropertySpec::ContainsEdge { .. } => {}
    }
}

fn require<'a, T>(x: &'a Option<T>, path: &str, kind: &str, r: &mut Report) -> Option<&'a T> {
    if x.is_none() {
        r.push(path, format!("`{kind}` experiments need [{path}]"));
    }
    x.as_ref()
}

/// Checks the free-edge count of an exact experiment by building its window.
fn check_exact_size(g: &GraphRecipe, h: &HSpec, size: Option<(usize, usize)>, r: &mut Report) {
    let Some((v, e)) = size else { return };
    if v + e > EXACT_GRAPH_LIMIT {
        r.push("graph", "window too large for exact enumeration");
        return;
    }
    if e <= MAX_FREE_EDGES {
        return;
    }
    let built = g
        .build()
        .and_then(|w| crate::run::build_h(&w, h).map(|hs| (w, hs)));
    match built {
        Ok((w, hs)) => {
            let free = w.edge_count() - hs.edge_count();
            if free > MAX_FREE_EDGES {
                r.push(
                    "h",
                    format!("{free} edges outside H; exact enumeration allows {MAX_FREE_EDGES}"),
                );
            }
        }
        Err(err) => r.push("h", err.to_string()),
    }
}

pub fn validate(spec: &ExperimentSpec) -> Report {
    let mut r = Report::default();
    if spec.schema_version != SCHEMA_VERSION {
        r.push(
            "schema_version",
            format!(
                "unsupported version {}; expected {SCHEMA_VERSION}",
                spec.schema_version
            ),
        );
    }
    if spec.name.is_empty()
        || !spec
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        r.push(
            "name",
            "must be non-empty and use only ASCII letters, digits, `_` and `-`",
        );
    }
    let kind = spec.experiment.kind_name();

    if let Experiment::Pc {
        family,
        sizes,
        trials,
        grid,
    } = &spec.experiment
    {
        if spec.graph.is_some() || spec.h.is_some() {
            r.push(
                "graph",
                "`pc` experiments build their own windows; remove [graph] and [h]",
            );
        }
        check_increasing(sizes, 2, "experiment.sizes", &mut r);
        check_count(*trials, "experiment.trials", &mut r);
        if let Some(g) = grid {
            check_grid(g, "experiment.grid", &mut r);
        }
        let radius = 2 * sizes.last().copied().unwrap_or(0);
        let ok = match *family {
            PcFamilySpec::Lattice { dim } => Lattice::new(dim, radius.max(1)).map(|_| ()),
            PcFamilySpec::Tree { degree } => RegularTree::new(degree, radius).map(|_| ()),
        };
        if let Err(e) = ok {
            r.push("experiment.family", e.to_string());
        }
        return r;
    }

    let Some(g) = require(&spec.graph, "graph", kind, &mut r) else {
        return r;
    };
    let size = check_graph(g, &mut r);
    let h = spec.h.as_ref();
    if let Some(h) = h {
        check_h(h, g, size.map(|s| s.0), &mut r);
    }
    match &spec.experiment {
        Experiment::Pc { .. } => unreachable!(),
        Experiment::Sweep {
            property,
            trials,
            grid,
            delta,
        } => {
            require(&spec.h, "h", kind, &mut r);
            check_property(property, h, &mut r);
            check_count(*trials, "experiment.trials", &mut r);
            if let Some(g) = grid {
                check_grid(g, "experiment.grid", &mut r);
            }
            check_delta(*delta, &mut r);
        }
        Experiment::Growth { p, radii, trials } => {
            require(&spec.h, "h", kind, &mut r);
            check_prob(*p, "experiment.p", &mut r);
            check_increasing(radii, 2, "experiment.radii", &mut r);
            check_count(*trials, "experiment.trials", &mut r);
        }
        Experiment::CutPoints {
            p_values, trials, ..
        } => {
            require(&spec.h, "h", kind, &mut r);
            if p_values.is_empty() {
                r.push("experiment.p_values", "need at least one p");
            }
            for p in p_values {
                check_prob(*p, "experiment.p_values", &mut r);
            }
            check_count(*trials, "experiment.trials", &mut r);
        }
        Experiment::Recurrence {
            p,
            n_walks,
            horizons,
        } => {
            require(&spec.h, "h", kind, &mut r);
            check_prob(*p, "experiment.p", &mut r);
            if *n_walks < 2 {
                r.push("experiment.n_walks", "need at least 2 walks");
            }
            check_increasing(horizons, 3, "experiment.horizons", &mut r);
        }
        Experiment::LineTransience {
            p_values,
            runs,
            radii,
            level_risk,
        } => {
            if !matches!(g, GraphRecipe::LineGraph { .. }) {
                r.push(
                    "graph.family",
                    "`line_transience` needs a line_graph window",
                );
            }
            if h.is_some_and(|h| *h != HSpec::Backbone) {
                r.push(
                    "h.recipe",
                    "`line_transience` uses the backbone; omit [h] or set recipe = \"backbone\"",
                );
            }
            if p_values.is_empty() {
                r.push("experiment.p_values", "need at least one p");
            }
            for p in p_values {
                check_prob(*p, "experiment.p_values", &mut r);
            }
            check_count(*runs, "experiment.runs", &mut r);
            check_increasing(radii, 3, "experiment.radii", &mut r);
            if !(*level_risk > 0.0 && *level_risk < 1.0) {
                r.push("experiment.level_risk", "must lie in (0, 1)");
            }
        }
        Experiment::Counterexample {
            trials,
            grid,
            delta,
        } => {
            if !matches!(
                g,
                GraphRecipe::RegularTree { .. } | GraphRecipe::GluedTrees { .. }
            ) {
                r.push(
                    "graph.family",
                    "`counterexample` needs a regular_tree or glued_trees window",
                );
            }
            if h.is_some_and(|h| *h != HSpec::PeCounterexample) {
                r.push(
                    "h.recipe",
                    "`counterexample` uses pe_counterexample; omit [h] or name it",
                );
            }
            check_count(*trials, "experiment.trials", &mut r);
            check_delta(*delta, &mut r);
            if let Some(grid) = grid {
                let parsed: Vec<Option<BigRational>> =
                    grid.iter().map(|s| parse_rational(s)).collect();
                let zero = BigRational::from_integer(0.into());
                let one = BigRational::from_integer(1.into());
                if grid.is_empty()
                    || parsed
                        .iter()
                        .any(|p| p.as_ref().map_or(true, |p| *p <= zero || *p >= one))
                    || parsed.windows(2).any(|w| w[0] >= w[1])
                {
                    r.push(
                        "experiment.grid",
                        "need rationals `a/b`, strictly increasing inside (0, 1)",
                    );
                }
            }
        }
        Experiment::Exact { property, p_values } => {
            let Some(h) = require(&spec.h, "h", kind, &mut r) else {
                return r;
            };
            check_property(property, Some(h), &mut r);
            if !g.is_materialized() {
                r.push(
                    "graph.family",
                    "exact enumeration needs a materialized window",
                );
            }
            if p_values.is_empty() {
                r.push("experiment.p_values", "need at least one p");
            }
            let zero = BigRational::from_integer(0.into());
            let one = BigRational::from_integer(1.into());
            for s in p_values {
                if parse_rational(s).map_or(true, |p| p < zero || p > one) {
                    r.push(
                        "experiment.p_values",
                        format!("`{s}` is not a rational in [0, 1]"),
                    );
                }
            }
            if r.is_ok() {
                check_exact_size(g, h, size, &mut r);
            }
        }
    }
    r
}
