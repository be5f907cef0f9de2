//! Exact probability computation on DTMCs.

mod linear;
mod reach;

pub use linear::FixedPointSystem;
pub use reach::{
    bounded_until_probs, next_probs, predecessors, qualitative_sets, until_probs, until_probs_vi,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("singular linear system block of size {size}")]
    SingularSystem { size: usize },

    #[error("step bound [{k1},{k2}] has lower bound above upper bound")]
    BoundError { k1: u32, k2: u32 },
}
