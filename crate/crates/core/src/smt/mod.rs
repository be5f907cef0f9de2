//! Constraint encoding of formulas with a homogeneous scheduler prefix.
//!
//! Every composed state gets truth and value variables for every
//! subformula; choice variables select one action per scheduler variable
//! and state. The system is satisfiable iff the formula holds (or, for a
//! universal prefix, iff it fails). It can be printed as SMT-LIB2, handed
//! to an external solver, or decided internally by enumerating choices.

mod assign;
mod dag;
mod decode;
mod eager;
mod emit;
mod encode;
mod external;
mod system;

pub use assign::{Model, Value};
pub use dag::{Dag, NodeKind};
pub use decode::{decode_witness, unsat_verdict};
pub use eager::{solve_eager, solve_encoded, SmtVerdict};
pub use emit::{emit_smtlib2, Names, Symbol};
pub use encode::encode_main;
pub use external::{parse_model, solve_external};
pub use system::{
    Block, BoolExpr, ChoiceDomain, ChoiceLit, CmpOp, Constraint, ConstraintSystem, Polarity, Term,
    TruthTree, Var,
};

#[cfg(test)]
mod tests;
