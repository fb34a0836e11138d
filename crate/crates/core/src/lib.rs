//! Normalized Laplacian spectra of iterated graph triangulations.
//!
//! The triangulation `τ(G)` adds one vertex per edge of `G`, joined to both
//! endpoints. This crate computes the normalized Laplacian spectrum of
//! `τⁿ(G)` two ways, by dense eigendecomposition of the explicitly built graph
//! and by an exact symbolic recursion from the seed spectrum alone, and
//! derives the multiplicative degree-Kirchhoff index, Kemeny's constant and the
//! number of spanning trees from closed forms that are cross-checked against
//! independent oracles.
//!
//! ```
//! use trispec::graph::{generate, GraphKind};
//! use trispec::spectra::SpectrumDescriptor;
//!
//! let k3 = generate(GraphKind::Complete, 3).unwrap();
//! let d = SpectrumDescriptor::from_graph(&k3, 2).unwrap();
//! assert!((d.reciprocal_sum().total() - 49.0 / 3.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod count;
pub mod graph;
pub mod invariants;
pub mod numeric;
pub mod spectra;

pub use count::BigCount;
pub use graph::{Graph, GraphAnalysis, GraphError};
pub use invariants::{InvariantReport, SeedInvariants, VerifyOptions};
pub use spectra::SpectrumDescriptor;
