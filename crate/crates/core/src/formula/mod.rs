//! HyperPCTL formulas: concrete syntax, AST, derived-operator expansion and
//! scope checking.
//!
//! ```text
//! exists sched s. forall st x(s). exists st y(s).
//!     init(x) -> P(F a(x)) = P(F a(y))
//! ```
//!
//! Only `true`, propositions, `&`, `!` and `<` survive parsing; every other
//! connective and relation is rewritten into those.

mod ast;
mod check;
mod lexer;
mod parser;

pub use ast::{Formula, NonQuantified, PathFormula, ProbExpr, QuantDecl, Quantifier};
pub use check::{check_well_formed, count_quantifiers, Binding, StateVar};
pub use parser::parse_formula;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("step bound [{k1},{k2}] has lower bound above upper bound")]
    InvalidBound { k1: u32, k2: u32 },

    #[error("state variable '{name}' is not bound by a state quantifier")]
    UnboundStateVariable { name: String },

    #[error("scheduler variable '{name}' is not bound by a scheduler quantifier")]
    UnboundSchedulerVariable { name: String },

    #[error("state quantifier '{state}' precedes scheduler quantifier '{sched}'")]
    QuantifierOrderViolation { state: String, sched: String },

    #[error("unknown proposition '{name}'")]
    UnknownProposition { name: String },

    #[error("variable '{name}' is bound twice")]
    DuplicateVariable { name: String },
}
