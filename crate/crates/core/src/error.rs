use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::formula::FormulaError;
use crate::model::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Formula(#[from] FormulaError),

    #[error(transparent)]
    Analysis(#[from] AnalysisError),

    #[error("{count} {what} exceed the configured limit of {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("scheduler space of the model is too large to enumerate")]
    SchedulerSpaceTooLarge,

    #[error("scheduler quantifiers mix 'forall' and 'exists'; use the enumeration engine")]
    MixedSchedulerBlock,

    #[error("solver model does not assign '{var}'")]
    IncompleteModel { var: String },

    #[error("solver: {0}")]
    Solver(String),
}
