//! Line-oriented text form of a [`Graph`].
//!
//! ```text
//! enlarge-graph v1
//! family zd_box dim=1 radius=1
//! origin 1
//! vertices 3
//! v 0 z:-1
//! ...
//! edges 2
//! e 0 0 1
//! ...
//! boundary 2
//! b 0
//! b 2
//! ```

use std::io::{self, BufRead, Write};

use super::lattice::coord_edge_key;
use super::{FamilyTag, Graph, Topology, VertexLabel};
use crate::error::{Error, Result};
use crate::textio::LineReader;

const HEADER: &str = "enlarge-graph v1";

pub fn write_graph<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "family {}", g.family())?;
    writeln!(w, "origin {}", g.origin())?;
    writeln!(w, "vertices {}", g.vertex_count())?;
    for (v, label) in g.labels().iter().enumerate() {
        writeln!(w, "v {v} {label}")?;
    }
    writeln!(w, "edges {}", g.edge_count())?;
    for (e, (u, v)) in g.edge_list().iter().enumerate() {
        writeln!(w, "e {e} {u} {v}")?;
    }
    let boundary = g.boundary();
    writeln!(w, "boundary {}", boundary.len())?;
    for b in boundary {
        writeln!(w, "b {b}")?;
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = LineReader::new(r);
    lines.expect(HEADER)?;
    let family: FamilyTag = lines
        .keyed("family")?
        .parse()
        .map_err(|e: String| lines.err(e))?;
    let origin: usize = lines.parse_keyed("origin")?;

    let n: usize = lines.parse_keyed("vertices")?;
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let rest = lines.keyed("v")?;
        let (id, label) = rest
            .split_once(' ')
            .ok_or_else(|| lines.err("expected `v <id> <label>`"))?;
        if id.parse::<usize>().ok() != Some(i) {
            return Err(lines.err(format!("vertex ids must be dense; expected {i}")));
        }
        labels.push(label.parse::<VertexLabel>().map_err(|e| lines.err(e))?);
    }

    let m: usize = lines.parse_keyed("edges")?;
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let f = lines.numbers("e", 3)?;
        if f[0] != i {
            return Err(lines.err(format!("edge ids must be dense; expected {i}")));
        }
        edges.push((f[1], f[2]));
    }

    let k: usize = lines.parse_keyed("boundary")?;
    let mut boundary = Vec::with_capacity(k);
    for _ in 0..k {
        boundary.push(lines.numbers("b", 1)?[0]);
    }

    let keys = match family {
        FamilyTag::ZdBox { .. } => Some(lattice_keys(&labels, &edges)?),
        _ => None,
    };
    let g = Graph::new(family, labels, edges, &boundary, origin)?;
    Ok(match keys {
        Some(keys) => g.with_edge_keys(keys),
        None => g,
    })
}

fn lattice_keys(labels: &[VertexLabel], edges: &[(usize, usize)]) -> Result<Vec<u64>> {
    edges
        .iter()
        .map(|&(u, v)| {
            let coord = |x: usize| match labels.get(x) {
                Some(VertexLabel::Coord(c)) => Ok(c),
                _ => Err(Error::InvalidGraph(format!(
                    "lattice vertex {x} lacks coordinates"
                ))),
            };
            let (a, b) = (coord(u)?, coord(v)?);
            let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            match diff.as_slice() {
                [axis] if (a[*axis] - b[*axis]).abs() == 1 => {
                    let lower = if a[*axis] < b[*axis] { a } else { b };
                    Ok(coord_edge_key(lower, *axis))
                }
                _ => Err(Error::InvalidGraph(format!(
                    "({u},{v}) is not a lattice edge"
                ))),
            }
        })
        .collect()
}
