//! Spanning-forest calculus of weighted digraphs.
//!
//! Forest matrices and the Kirchhoff matrix, their polynomial identities, the
//! group and Moore–Penrose inverses of the Kirchhoff matrix, the geometric
//! observation model for related Markov chains, and forest-based
//! accessibility measures. Everything is generic over [`Scalar`], so the same
//! code runs in exact rational arithmetic or in `f64`; a brute-force forest
//! enumerator ([`oracle`]) serves as an independent check for small digraphs.

pub mod access;
pub mod digraph;
pub mod error;
pub mod fixtures;
pub mod forest;
pub mod ginv;
pub mod markov;
pub mod matrix;
pub mod oracle;
pub mod registry;
pub mod scalar;

pub use digraph::{analyze_structure, parse_digraph, StructureReport, WeightedDigraph};
pub use error::{Error, Result};
pub use forest::{forest_sequence, q_tau, ForestSequence};
pub use matrix::{Matrix, MatrixDoc};
pub use scalar::{parse_rational, Rational, Scalar, ScalarKind};
