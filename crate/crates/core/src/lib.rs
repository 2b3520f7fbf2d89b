//! Exact and simulation tools for 1-independent bond percolation.
//!
//! The crate covers four layers:
//!
//! * [`graph`] and [`measure`]: small graphs, measures over their spanning
//!   subgraphs, and the 1-independence checks.
//! * [`constructions`]: explicit extremal measures and vertex-based models.
//! * [`lp`] and [`bounds`]: the exact linear programme, the support method, and
//!   closed-form and renormalisation bounds.
//! * [`lattice`]: seeded finite-window samplers with per-sample certificates.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod json;
pub mod lattice;
pub mod lp;
pub mod measure;
pub mod scalar;
pub mod vertex;

pub use error::{Error, Result};
pub use graph::{EdgeSubset, LabeledGraph, VertexPermutation};
pub use measure::{IndependenceReport, Measure, ValidationReport};
pub use scalar::{Rational, Scalar};
pub use vertex::VertexBasedMeasure;
