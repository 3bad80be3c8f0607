//! Discussion-tactic policy: feature encoding, conservative Q-learning over the six
//! tactics, and tactic selection.

pub mod cql;
pub mod dataset;
pub mod error;
pub mod features;
pub mod qnet;

pub use cql::{
    cql_loss, cql_loss_and_grads, grad_check, grad_check_with, select_tactic,
    select_tactic_from_values, train, QFunction, SelectionMode, TrainerConfig,
};
pub use dataset::{RewardMode, Transition, TransitionsFile, TransitionsHeader};
pub use error::PolicyError;
pub use features::{
    claim_counts, encode_features, encode_structural, render_state_text, structural_dim,
    EncoderMode, FeatureInput, TextEmbedder,
};
