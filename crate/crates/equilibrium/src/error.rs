use thiserror::Error;

use crate::three_player::Constraint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("invalid belief triple: {0}")]
    InvalidBelief(String),
    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),
    #[error("belief triple outside the equilibrium region: {constraint} ({detail})")]
    Region { constraint: Constraint, detail: String },
    #[error("malformed game tree: {0}")]
    Tree(String),
}
