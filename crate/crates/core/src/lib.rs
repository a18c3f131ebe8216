//! Commutator surjectivity for real simple Lie algebras: a Satake-diagram
//! catalog with the classification verdict, matrix realizations of the
//! classical families, and numerical single-commutator solvers.

pub mod algebra;
pub mod diagram;
pub mod linalg;
pub mod cli;
pub mod solver;
pub mod structure;
pub mod suite;
