//! Enlargement of subgraphs by Bernoulli bond percolation on finite windows
//! of infinite graphs.

pub mod error;
pub mod estimators;
pub mod exact;
pub mod graph;
pub mod hash;
pub mod percolation;
pub mod properties;
pub mod stats;
mod textio;
mod vset;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{
    Bipartition, EdgeId, Graph, Lattice, RegularTree, Subgraph, Topology, VertexId, Window,
};
pub use percolation::{enlarge, sample_config, Configuration};
pub use properties::{Property, PropertyKind, PropertyVerdict, Verdict};
