//! Finite Brouwer algebras and the machinery around them: up-set algebras,
//! free distributive lattices over implicative upper semilattices,
//! propositional formulas under the Brouwer (least-element-is-valid)
//! reading, Kripke frames, p-morphisms, strong u-antichain embeddings and
//! finite splitting-class checks. Everything is exhaustive and exact.

pub mod bits;
pub mod brouwer;
pub mod embedding;
pub mod error;
pub mod free;
pub mod kripke;
pub mod logic;
pub mod order;
pub mod splitting;
pub mod suite;
pub mod upset;

pub use error::{Error, Result};
