//! Reference semantics: every scheduler and state quantifier is instantiated
//! explicitly and the body is evaluated on the resulting self-composition.

mod checker;
mod eval;

pub use checker::{check, replay, CheckOptions};
pub use eval::{eval_body, eval_prob, BodyEvaluator};
