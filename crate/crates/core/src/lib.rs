//! Enumeration of admissible two-colored diagrams (zw-matrix pairs) for
//! singular sequences of central configurations of the planar N-vortex
//! problem.
//!
//! A candidate diagram is a pair of binary symmetric matrices (A|B): the
//! z-matrix and the w-matrix. Off-diagonal ones are strokes, diagonal ones
//! are circles. The [`pipeline`] module runs the staged search (generate
//! trace-classified z-candidates, filter, expand w-orbits, match, filter
//! pairs, deduplicate); the [`rules`] module holds the eleven admissibility
//! predicates; the [`annotate`] module turns sub-diagram patterns of a
//! surviving pair into symbolic vorticity constraints; the [`oracle`]
//! module cross-checks the pipeline by unstaged brute force at small n.

pub mod annotate;
pub mod gamma;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod render;
pub mod rules;

mod error;

pub use error::{Error, Result};
pub use matrix::{BinarySymmetricMatrix, CanonicalKey, EdgeKind, Partition, Permutation, ZWMatrix};
