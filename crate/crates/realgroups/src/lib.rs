//! Exact-arithmetic engine for the combinatorics of real reductive groups:
//! based root data with inner classes, the KGB space of strong involutions,
//! finite character groups of Cartan fibers, Langlands parameters in
//! `(lambda, y)` form, and the computation of lowest K-types by two
//! independent routes that are cross-checked against each other.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals);
//! there is no floating point anywhere in this crate.

#![forbid(unsafe_code)]

pub mod lattice;
pub mod rootdata;
pub mod tits;
pub mod kgb;
pub mod chartorus;
pub mod lparams;
pub mod oracle;
pub mod atlasparams;
pub mod lkt;
pub mod sampling;
pub mod checks;
pub mod chevalley;

pub use lattice::{Q, Z};
