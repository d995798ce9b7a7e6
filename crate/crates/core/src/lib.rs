//! Deterministic distributed maximal matching in hypergraphs by rounding
//! fractional matchings, and the algorithms built on it: list edge
//! coloring, maximal independent set, approximate maximum matching and
//! low out-degree orientation.
//!
//! All algorithms run sequentially and charge the LOCAL-model rounds they
//! would use to a [`ledger::RoundLedger`].

pub mod applications;
pub mod coloring;
pub mod dyadic;
pub mod edge_coloring;
pub mod format;
pub mod generate;
pub mod hypergraph;
pub mod ledger;
pub mod oracles;
pub mod packing;
pub mod rounding;

pub use dyadic::Dyadic;
pub use hypergraph::{EdgeId, Graph, Hypergraph, Matching, VertexId};
pub use ledger::{RoundLedger, Session};
