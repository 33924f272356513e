//! Blowup algebras of good filtrations over a graded-local base ring.
//!
//! The crate constructs the Rees algebra, associated graded ring, fiber cone
//! and the derived maximal-ideal filtration of a good filtration, presents
//! them as finitely generated t-graded modules over B = k[x][y], and computes
//! Castelnuovo-Mumford regularity, a-invariants, depth, analytic spread and
//! reduction numbers. A verification harness turns the structural statements
//! relating these invariants into executable checks over a bundled corpus.

pub mod blowup;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod engine;
pub mod filtration;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod homology;
pub mod ideal;
pub mod monomial;
pub mod newton;
pub mod parse;
pub mod reduction;
pub mod report;
pub mod poly;
pub mod ring;
pub mod rng;
pub mod sequences;
pub mod scalar;

pub use engine::Budget;
pub use error::{Error, Result};
pub use ideal::{Dim, IdealHandle};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::RingDescriptor;
pub use scalar::{PrimeField, DEFAULT_PRIME};

pub use cli::run_cli;
