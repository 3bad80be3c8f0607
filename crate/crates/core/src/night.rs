//! Night actions, their legality and resolution in call order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::Assignment;
use crate::role::{PlayerId, RoleCard};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NightActionKind {
    WerewolfPeek,
    SeerCheckPlayer(PlayerId),
    /// Two distinct pool indices in `0..3`, stored in ascending order.
    SeerCheckPool(u8, u8),
    RobberSwitch(PlayerId),
    RobberPass,
    /// Two distinct other players, stored in ascending order.
    TroublemakerSwap(PlayerId, PlayerId),
    InsomniacPeek,
    NoAction,
}

impl NightActionKind {
    /// Orders the unordered pairs so that equal actions compare equal.
    pub fn normalized(self) -> Self {
        match self {
            NightActionKind::SeerCheckPool(a, b) if a > b => NightActionKind::SeerCheckPool(b, a),
            NightActionKind::TroublemakerSwap(a, b) if a > b => {
                NightActionKind::TroublemakerSwap(b, a)
            }
            k => k,
        }
    }

    /// Whether the action can change the role assignment.
    pub fn moves_cards(self) -> bool {
        matches!(
            self,
            NightActionKind::RobberSwitch(_) | NightActionKind::TroublemakerSwap(..)
        )
    }
}

impl fmt::Display for NightActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NightActionKind::WerewolfPeek => write!(f, "looks for other Werewolves"),
            NightActionKind::SeerCheckPlayer(t) => write!(f, "checks {t}"),
            NightActionKind::SeerCheckPool(a, b) => {
                write!(f, "checks pool cards {} and {}", a + 1, b + 1)
            }
            NightActionKind::RobberSwitch(t) => write!(f, "switches roles with {t}"),
            NightActionKind::RobberPass => write!(f, "does not switch"),
            NightActionKind::TroublemakerSwap(a, b) => write!(f, "swaps {a} and {b}"),
            NightActionKind::InsomniacPeek => write!(f, "checks its final role"),
            NightActionKind::NoAction => write!(f, "does nothing"),
        }
    }
}

/// What an actor privately learns from its own night action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observation {
    Nothing,
    /// Other players whose initial role is Werewolf (empty for a lone wolf).
    Werewolves(Vec<PlayerId>),
    SawPlayer { target: PlayerId, role: RoleCard },
    SawPool { indices: [u8; 2], roles: [RoleCard; 2] },
    /// Robber's role after switching.
    NewRole(RoleCard),
    /// Insomniac's role at the end of the night.
    FinalRole(RoleCard),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NightRecord {
    pub actor: PlayerId,
    pub action: NightActionKind,
    pub observation: Observation,
}

/// Actions available to `actor` given its initial role. Roles that are not called
/// in `night_order` can only do nothing.
pub fn legal_actions_for(
    initial_role: RoleCard,
    actor: PlayerId,
    player_count: usize,
    night_order: &[RoleCard],
) -> Vec<NightActionKind> {
    use NightActionKind::*;
    if !night_order.contains(&initial_role) {
        return vec![NoAction];
    }
    let others = || PlayerId::all(player_count).filter(move |p| *p != actor);
    match initial_role {
        RoleCard::Villager => vec![NoAction],
        RoleCard::Werewolf => vec![WerewolfPeek],
        RoleCard::Seer => {
            let mut v: Vec<_> = others().map(SeerCheckPlayer).collect();
            v.extend([SeerCheckPool(0, 1), SeerCheckPool(0, 2), SeerCheckPool(1, 2)]);
            v
        }
        RoleCard::Robber => {
            let mut v = vec![RobberPass];
            v.extend(others().map(RobberSwitch));
            v
        }
        RoleCard::Troublemaker => {
            // The swap is optional.
            let o: Vec<_> = others().collect();
            let mut v = vec![NoAction];
            for i in 0..o.len() {
                for j in i + 1..o.len() {
                    v.push(TroublemakerSwap(o[i], o[j]));
                }
            }
            v
        }
        RoleCard::Insomniac => vec![InsomniacPeek],
    }
}

/// Whether the player is woken during the night.
pub fn is_called(initial_role: RoleCard, night_order: &[RoleCard]) -> bool {
    initial_role.has_night_ability() && night_order.contains(&initial_role)
}

/// Applies one action per called player, role by role in `night_order` and by
/// ascending seat within a role. Abilities bind to initial roles.
pub fn resolve_actions(
    initial: &Assignment,
    night_order: &[RoleCard],
    actions: &BTreeMap<PlayerId, NightActionKind>,
) -> Result<(Assignment, Vec<NightRecord>), GameError> {
    let n = initial.player_roles.len();
    for (actor, kind) in actions {
        if actor.index() >= n {
            return Err(GameError::IllegalAction {
                actor: *actor,
                reason: "no such player".into(),
            });
        }
        let legal = legal_actions_for(initial.player_roles[actor.index()], *actor, n, night_order);
        if !legal.contains(&kind.normalized()) {
            return Err(GameError::IllegalAction {
                actor: *actor,
                reason: format!(
                    "`{kind}` is not legal for initial role {}",
                    initial.player_roles[actor.index()]
                ),
            });
        }
    }

    let mut current = initial.clone();
    let mut records = Vec::new();
    for role in night_order {
        for actor in PlayerId::all(n).filter(|p| initial.player_roles[p.index()] == *role) {
            if !is_called(*role, night_order) {
                continue;
            }
            let kind = actions
                .get(&actor)
                .copied()
                .ok_or_else(|| GameError::IllegalAction {
                    actor,
                    reason: format!("missing night action for {role}"),
                })?
                .normalized();
            let observation = apply_one(initial, &mut current, actor, kind);
            records.push(NightRecord { actor, action: kind, observation });
        }
    }
    Ok((current, records))
}

/// Applies a single (already validated) action to `current`.
pub fn apply_one(
    initial: &Assignment,
    current: &mut Assignment,
    actor: PlayerId,
    kind: NightActionKind,
) -> Observation {
    use NightActionKind::*;
    match kind {
        WerewolfPeek => Observation::Werewolves(
            PlayerId::all(initial.player_roles.len())
                .filter(|p| *p != actor && initial.player_roles[p.index()] == RoleCard::Werewolf)
                .collect(),
        ),
        SeerCheckPlayer(t) => Observation::SawPlayer {
            target: t,
            role: current.player_roles[t.index()],
        },
        SeerCheckPool(a, b) => Observation::SawPool {
            indices: [a, b],
            roles: [current.pool[a as usize], current.pool[b as usize]],
        },
        RobberSwitch(t) => {
            current.player_roles.swap(actor.index(), t.index());
            Observation::NewRole(current.player_roles[actor.index()])
        }
        RobberPass => Observation::Nothing,
        TroublemakerSwap(a, b) => {
            current.player_roles.swap(a.index(), b.index());
            Observation::Nothing
        }
        InsomniacPeek => Observation::FinalRole(current.player_roles[actor.index()]),
        NoAction => Observation::Nothing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::DEFAULT_NIGHT_ORDER;
    use RoleCard::*;

    #[test]
    fn villager_has_only_no_action() {
        assert_eq!(
            legal_actions_for(Villager, PlayerId(0), 5, &DEFAULT_NIGHT_ORDER),
            vec![NightActionKind::NoAction]
        );
    }

    #[test]
    fn robber_five_options() {
        let v = legal_actions_for(Robber, PlayerId(3), 5, &DEFAULT_NIGHT_ORDER);
        assert_eq!(v.len(), 5);
        assert!(v.contains(&NightActionKind::RobberPass));
        assert!(!v.contains(&NightActionKind::RobberSwitch(PlayerId(3))));
    }

    #[test]
    fn seer_four_players_plus_three_pool_pairs() {
        let v = legal_actions_for(Seer, PlayerId(2), 5, &DEFAULT_NIGHT_ORDER);
        let players = v
            .iter()
            .filter(|a| matches!(a, NightActionKind::SeerCheckPlayer(_)))
            .count();
        let pools = v
            .iter()
            .filter(|a| matches!(a, NightActionKind::SeerCheckPool(..)))
            .count();
        assert_eq!((players, pools), (4, 3));
    }

    #[test]
    fn troublemaker_pairs_exclude_self() {
        let v = legal_actions_for(Troublemaker, PlayerId(0), 5, &DEFAULT_NIGHT_ORDER);
        assert_eq!(v.len(), 7);
        for a in v {
            if let NightActionKind::TroublemakerSwap(x, y) = a {
                assert!(x != PlayerId(0) && y != PlayerId(0) && x < y);
            }
        }
    }

    #[test]
    fn uncalled_role_does_nothing() {
        let order = [Werewolf, Seer];
        assert_eq!(
            legal_actions_for(Robber, PlayerId(0), 3, &order),
            vec![NightActionKind::NoAction]
        );
    }
}
