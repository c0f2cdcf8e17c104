//! Exact computation of inertia groups, Brauer invariants, graded Schur
//! indices and canonical graded-simple module labels for abelian-group
//! gradings on the classical simple Lie algebras (series A, B, C, D),
//! cross-validated against brute-force oracles built from monomial matrix
//! algebras and exact Clifford algebras over cyclotomic fields.

pub mod abelian;
pub mod bichar;
pub mod classify;
pub mod cli;
pub mod gradings;
pub mod invariants;
pub mod oracle;
