//! Exact beliefs of scripted players over deals and their night outcomes.

use std::collections::BTreeMap;

use onuw_core::night::resolve_actions;
use onuw_core::{
    argmax_role, Assignment, Belief, BeliefReport, Claim, ClaimConsistency, LikelihoodModel,
    PlayerId, RoleCard, RoleView,
};

use crate::context::AgentContext;
use crate::error::AgentError;
use crate::table::NightTable;

/// A deal together with the cards everyone holds after the night.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct World {
    pub initial: Assignment,
    pub fin: Assignment,
}

impl RoleView for World {
    fn player_count(&self) -> usize {
        self.initial.player_roles.len()
    }

    fn role_of(&self, player: PlayerId) -> RoleCard {
        self.fin.role_of(player)
    }

    fn initial_role_of(&self, player: PlayerId) -> RoleCard {
        self.initial.role_of(player)
    }
}

/// The night that would follow `initial` if every other seat played `table` and `me`
/// played `own_action` (or the table when `None`).
pub fn simulate_night(
    ctx: &AgentContext,
    table: &NightTable,
    initial: &Assignment,
) -> Option<(Assignment, Option<onuw_core::NightRecord>)> {
    let n = ctx.player_count();
    let mut actions = BTreeMap::new();
    for p in PlayerId::all(n) {
        let role = initial.role_of(p);
        if !onuw_core::night::is_called(role, &ctx.spec.night_order) {
            continue;
        }
        let a = match (p == ctx.player, ctx.own_action()) {
            (true, Some(a)) => a,
            _ => table.action(p, role, n),
        };
        actions.insert(p, a);
    }
    let (fin, records) = resolve_actions(initial, &ctx.spec.night_order, &actions).ok()?;
    let own = records.into_iter().find(|r| r.actor == ctx.player);
    Some((fin, own))
}

/// Every world consistent with the player's own card and night record.
pub fn consistent_worlds(ctx: &AgentContext, table: &NightTable) -> Vec<World> {
    Assignment::all_arrangements(&ctx.spec)
        .into_iter()
        .filter(|a| a.role_of(ctx.player) == ctx.initial_role)
        .filter_map(|a| {
            let (fin, own) = simulate_night(ctx, table, &a)?;
            (own == ctx.night).then_some(World { initial: a, fin })
        })
        .collect()
}

/// Exact posterior over worlds: uniform prior on the consistent set, then one
/// claim-consistency update per public claim in speaking order.
pub fn world_belief(
    ctx: &AgentContext,
    table: &NightTable,
    lik: &ClaimConsistency,
) -> Result<Belief<World>, AgentError> {
    let mut b = Belief::uniform(consistent_worlds(ctx, table))?;
    let claims: Vec<Claim> = ctx
        .history
        .iter()
        .filter(|s| s.player != ctx.player)
        .flat_map(|s| s.claims.iter().map(Claim::public))
        .collect();
    for (k, c) in claims.iter().enumerate() {
        b.update_in_place(c, &claims[..k], lik as &dyn LikelihoodModel<World, Claim>)?;
    }
    Ok(b)
}

pub fn report_from_belief(ctx: &AgentContext, b: &Belief<World>) -> BeliefReport {
    let marginals: Vec<[f64; 6]> = PlayerId::all(ctx.player_count()).map(|p| b.marginal(p)).collect();
    let self_estimate = argmax_role(&marginals[ctx.player.index()]);
    BeliefReport {
        rationale: format!("exact filter over {} deals", b.len()),
        marginals,
        self_estimate,
        degraded: false,
    }
}
