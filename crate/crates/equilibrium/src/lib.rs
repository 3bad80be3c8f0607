//! Exact analysis of the three-player Werewolf/Robber game: explicit game trees, expected
//! utilities, best responses, NashConv, and perfect Bayesian equilibrium checks.

pub mod error;
pub mod three_player;
pub mod tree;

pub use error::EquilibriumError;
pub use three_player::{
    build_tree_no_discussion, build_tree_with_discussion, certify_no_discussion, certify_discussion,
    closed_form_utilities, delta, no_discussion_closed_form, region_check, region_grid,
    stationarity_check, no_discussion_equilibrium, discussion_equilibrium, with_discussion_closed_form,
    BeliefSystem3P, BeliefTriple, CertificateRow, Constraint, NightChoice, RegionReport,
    StrategyProfile3P,
};
pub use tree::{
    verify_pbe, BehaviorProfile, BeliefSystem, InfosetCheck, OffPathPolicy, PbeReport, TreeGame,
};
