use thiserror::Error;

use crate::role::PlayerId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("wrong phase: expected {expected}, found {found}")]
    Phase { expected: String, found: String },
    #[error("illegal action by {actor}: {reason}")]
    IllegalAction { actor: PlayerId, reason: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("incomplete log: {0}")]
    IncompleteLog(String),
    #[error("log integrity error at {}: {detail}", location(.event))]
    Integrity { event: Option<usize>, detail: String },
    #[error("log parse error: {0}")]
    Parse(String),
}

fn location(event: &Option<usize>) -> String {
    match event {
        Some(i) => format!("event #{i}"),
        None => "log header/result".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeliefError {
    #[error("belief support is empty")]
    EmptySupport,
    #[error("belief support contains duplicate joint types")]
    DuplicateSupport,
    #[error("invalid prior weights: {0}")]
    InvalidWeights(String),
    #[error("likelihood model returned {value} (must be finite and >= 0)")]
    InvalidLikelihood { value: f64 },
    #[error("impossible observation: total posterior mass is zero")]
    ImpossibleObservation,
}
