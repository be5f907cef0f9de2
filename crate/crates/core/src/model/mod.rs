//! Explicit-state probabilistic models over exact rationals: MDPs, the
//! DTMCs induced by memoryless deterministic schedulers, and n-ary
//! self-composition.

mod compose;
mod dtmc;
mod mdp;
mod parse;
mod scheduler;

pub use compose::{self_compose, ComposedState, TupleIndexer};
pub use dtmc::{induce_dtmc, Dtmc};
pub use mdp::{validate_mdp, Choice, Distribution, Mdp, RawAction, RawLabel, RawModel};
pub use parse::{parse_mdpx, read_mdpx};
pub use scheduler::{
    enumerate_schedulers, scheduler_at, scheduler_count, SchedulerAssignment, SchedulerIter,
};

use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: row for state '{state}' action '{action}' sums to {sum}, expected 0 or 1")]
    RowSum {
        line: usize,
        state: String,
        action: String,
        sum: Rational,
    },

    #[error("line {line}: probability {value} outside [0,1]")]
    InvalidProbability { line: usize, value: Rational },

    #[error("state '{state}' has no enabled action")]
    NoEnabledAction { state: String },

    #[error("line {line}: undeclared {kind} '{name}'")]
    DanglingReference {
        line: usize,
        kind: &'static str,
        name: String,
    },

    #[error("line {line}: duplicate {kind} '{name}'")]
    Duplicate {
        line: usize,
        kind: &'static str,
        name: String,
    },

    #[error("model declares no states")]
    NoStates,

    #[error("scheduler picks action '{action}' in state '{state}', which is not enabled there")]
    IncompatibleScheduler { state: String, action: String },

    #[error("scheduler covers {got} states, model has {expected}")]
    SchedulerArity { expected: usize, got: usize },

    #[error("self-composition needs at least one component")]
    ArityZero,

    #[error("self-composition components have different state spaces")]
    MismatchedStateSpace,

    #[error("composed state space of {states}^{arity} exceeds the limit of {limit}")]
    CompositionTooLarge {
        states: usize,
        arity: usize,
        limit: usize,
    },
}
