//! Fixed night-action and vote rules for scripted players.

use std::collections::BTreeMap;

use onuw_core::{BeliefReport, NightActionKind, PlayerId, RoleCard, Team};
use serde::{Deserialize, Serialize};

/// Night behaviour of scripted players. Pinned entries apply to a seat only when the
/// pinned action belongs to the role that seat was dealt; otherwise the default rule
/// is used, so a pinned `NoAction` never stops a Troublemaker. Scripted players assume
/// everyone follows the same table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NightTable {
    #[serde(default)]
    pub pinned: BTreeMap<PlayerId, NightActionKind>,
}

fn role_of_action(a: NightActionKind) -> Option<RoleCard> {
    use NightActionKind::*;
    match a {
        WerewolfPeek => Some(RoleCard::Werewolf),
        SeerCheckPlayer(_) | SeerCheckPool(..) => Some(RoleCard::Seer),
        RobberSwitch(_) | RobberPass => Some(RoleCard::Robber),
        TroublemakerSwap(..) => Some(RoleCard::Troublemaker),
        InsomniacPeek => Some(RoleCard::Insomniac),
        NoAction => None,
    }
}

impl NightTable {
    pub fn pinned(pinned: BTreeMap<PlayerId, NightActionKind>) -> Self {
        NightTable { pinned }
    }

    /// Default rule, in seat order modulo `n`: the Seer looks at the next player, the
    /// Robber takes the next player's card, the Troublemaker swaps the next two players.
    pub fn default_action(seat: PlayerId, role: RoleCard, n: usize) -> NightActionKind {
        let next = |k: usize| PlayerId(((seat.index() + k) % n) as u8);
        match role {
            RoleCard::Villager => NightActionKind::NoAction,
            RoleCard::Werewolf => NightActionKind::WerewolfPeek,
            RoleCard::Seer => NightActionKind::SeerCheckPlayer(next(1)),
            RoleCard::Robber => NightActionKind::RobberSwitch(next(1)),
            RoleCard::Troublemaker => NightActionKind::TroublemakerSwap(next(1), next(2)).normalized(),
            RoleCard::Insomniac => NightActionKind::InsomniacPeek,
        }
    }

    pub fn action(&self, seat: PlayerId, role: RoleCard, n: usize) -> NightActionKind {
        match self.pinned.get(&seat) {
            Some(a) if role_of_action(*a) == Some(role) => a.normalized(),
            _ => Self::default_action(seat, role, n),
        }
    }
}

/// Vote of a scripted player. A player who believes it holds a Werewolf card votes
/// for the other player least likely to be a Werewolf; everyone else votes for the
/// other player most likely to be one. Ties go to the lowest seat.
pub fn team_aware_vote(me: PlayerId, report: &BeliefReport) -> PlayerId {
    let others = (0..report.marginals.len() as u8).map(PlayerId).filter(|p| *p != me);
    let wolf = report.self_estimate.team() == Team::Werewolf;
    let mut best: Option<(PlayerId, f64)> = None;
    for p in others {
        let w = report.werewolf_prob(p);
        let score = if wolf { -w } else { w };
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((p, score));
        }
    }
    best.map(|(p, _)| p).expect("at least two players")
}
