//! Model checking of HyperPCTL formulas on Markov decision processes, with
//! scheduler quantifiers ranging over memoryless deterministic schedulers.
//!
//! Two decision procedures share the model and formula front-ends: a direct
//! enumeration of quantifier instances ([`enumcheck`]) and a constraint
//! encoding ([`smt`]) that is either solved internally or exported as
//! SMT-LIB2.

pub mod analysis;
pub mod casegen;
pub mod enumcheck;
mod error;
pub mod fixtures;
pub mod formula;
pub mod model;
pub mod rational;
pub mod smt;
pub mod verdict;

pub use error::Error;
pub use model::{Dtmc, Mdp, ModelError, SchedulerAssignment, StateId};
pub use rational::Rational;
pub use verdict::{Verdict, VerdictMode};
