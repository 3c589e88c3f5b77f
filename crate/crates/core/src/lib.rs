//! Paraconsistent quantum superpositions.
//!
//! - [`logic`]: the calculus C1 with weak and strong negation.
//! - [`hilbert`]: finite-dimensional state spaces, observables and the Born rule.
//! - [`powers`]: quantum situations, p-truth and non-collapsing measurement.
//! - [`lattice`]: the orthomodular lattice of subspaces.

pub mod hilbert;
pub mod lattice;
pub mod logic;
pub mod numfmt;
pub mod powers;
