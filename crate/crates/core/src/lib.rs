//! Clique covers, set representations and independent-set covers of
//! k-uniform hypergraphs: exact oracles, randomized covering algorithms and
//! generators for structured instance families.

pub mod combinatorics;
pub mod cover;
pub mod coverage;
pub mod error;
pub mod exact;
pub mod gens;
pub mod hypergraph;
pub mod randcover;

pub use cover::{CliqueCover, CoverCertificate, SetRepresentation, Verdict, Violation};
pub use error::{Error, Result};
pub use hypergraph::{DegreeProfile, Hypergraph, Vertex, VertexSet};
