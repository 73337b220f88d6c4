//! Fixpoint reasoning with recurrent approximators.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: complete lattices, bilattice and tetralattice orderings,
//!   Kleene iteration.
//! - [`aft`]: approximators, stable revision, recurrence and monotonicity checks.
//! - [`kb`], [`entail`]: ground hybrid knowledge bases and propositional
//!   entailment.
//! - [`phi`]: the recurrent operator for knowledge bases and model checking.
//! - [`textio`]: the text format and report printers.
//! - [`cli`]: the `recaft` command line.

pub mod aft;
pub mod atoms;
pub mod cli;
pub mod corpus;
pub mod entail;
pub mod error;
pub mod kb;
pub mod lattice;
pub mod phi;
pub mod textio;

pub use atoms::AtomSet;
pub use error::Error;
pub use kb::{Atom, KnowledgeBase};
pub use lattice::{Approximation, Bi, Lattice, PowersetLattice, Tetra};

pub use phi::{FilterStrategy, ModelVerdict, Phi, PhiConfig};
