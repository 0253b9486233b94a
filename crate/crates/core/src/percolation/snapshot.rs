//! Text snapshot of a configuration.
//!
//! ```text
//! enlarge-config v1
//! seed 42
//! p 0.4
//! mode lazy
//! edges 12
//! forced 0
//! open 3
//! 1
//! 4
//! 9
//! ```
//!
//! The open list is always written out, so a snapshot also documents lazy
//! configurations; reading a lazy snapshot checks the list against the hash.

use std::io::{self, BufRead, Write};

use super::Configuration;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Topology};
use crate::textio::LineReader;

const HEADER: &str = "enlarge-config v1";

pub fn write_snapshot<T: Topology + ?Sized, W: Write>(
    cfg: &Configuration,
    g: &T,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    match cfg.seed() {
        Some(s) => writeln!(w, "seed {s}")?,
        None => writeln!(w, "seed none")?,
    }
    writeln!(w, "p {}", cfg.p())?;
    writeln!(
        w,
        "mode {}",
        if cfg.is_materialized() {
            "materialized"
        } else {
            "lazy"
        }
    )?;
    writeln!(w, "edges {}", g.edge_count())?;
    writeln!(w, "forced {}", cfg.forced_open().len())?;
    for e in cfg.forced_open() {
        writeln!(w, "{e}")?;
    }
    let open = cfg.open_edges(g);
    writeln!(w, "open {}", open.len())?;
    for e in open {
        writeln!(w, "{e}")?;
    }
    Ok(())
}

fn id_list<R: BufRead>(lines: &mut LineReader<R>, key: &str, m: usize) -> Result<Vec<EdgeId>> {
    let k: usize = lines.parse_keyed(key)?;
    let mut ids: Vec<EdgeId> = Vec::with_capacity(k.min(m));
    for _ in 0..k {
        let e: EdgeId = lines.bare()?;
        if e >= m || ids.last().is_some_and(|&last| last >= e) {
            return Err(lines.err("edge ids must be in range and strictly increasing"));
        }
        ids.push(e);
    }
    Ok(ids)
}

pub fn read_snapshot<T: Topology + ?Sized, R: BufRead>(g: &T, r: R) -> Result<Configuration> {
    let mut lines = LineReader::new(r);
    lines.expect(HEADER)?;
    let seed = match lines.keyed("seed")?.as_str() {
        "none" => None,
        s => Some(s.parse::<u64>().map_err(|_| lines.err("bad seed"))?),
    };
    let p: f64 = lines.parse_keyed("p")?;
    if !(0.0..=1.0).contains(&p) {
        return Err(lines.err("p outside [0, 1]"));
    }
    let lazy = match lines.keyed("mode")?.as_str() {
        "lazy" => true,
        "materialized" => false,
        _ => return Err(lines.err("mode must be `lazy` or `materialized`")),
    };
    let m: usize = lines.parse_keyed("edges")?;
    if m != g.edge_count() {
        return Err(Error::Mismatch(format!(
            "snapshot covers {m} edges, graph has {}",
            g.edge_count()
        )));
    }
    let forced = id_list(&mut lines, "forced", m)?;
    let open = id_list(&mut lines, "open", m)?;

    if lazy {
        let seed = seed.ok_or_else(|| Error::parse(2, "lazy configurations need a seed"))?;
        let cfg = Configuration::restore(p, Some(seed), forced, None);
        if cfg.open_edges(g) != open {
            return Err(Error::Mismatch(
                "open list disagrees with the seeded hash".into(),
            ));
        }
        Ok(cfg)
    } else {
        Ok(Configuration::restore(p, seed, forced, Some((m, &open))))
    }
}
