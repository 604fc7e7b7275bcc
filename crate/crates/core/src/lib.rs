//! Exhaustive generation of theorems of implicational linear logic together
//! with their proof terms in normal form.
//!
//! The pipeline runs both ways across the Curry-Howard correspondence:
//! [`formula_gen`] enumerates formulas and [`ljt`] proves them, keeping the
//! linear proofs; [`term_gen`] enumerates linear normal forms and infers
//! their principal types, which are exactly the theorems; [`balanced`] runs
//! that generator backwards as a prover.

pub mod balanced;
pub mod cli;
pub mod counts;
pub mod dataset;
pub mod formula_gen;
pub mod ljt;
pub mod syntax;
pub mod term_gen;
pub mod unify;

pub use syntax::{BinderId, Formula, ParseError, PostfixToken, Skeleton, Term};
