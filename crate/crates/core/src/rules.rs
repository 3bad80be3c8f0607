//! Vote tallying, winner determination and utilities.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::role::{PlayerId, RoleCard, Team};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteTally {
    /// `votes[i]` is the target of voter `i`.
    pub votes: Vec<PlayerId>,
    /// Votes received per player.
    pub received: Vec<u32>,
    pub deaths: BTreeSet<PlayerId>,
}

/// Tallies simultaneous votes. Every player tied for the most votes dies, unless
/// nobody received more than one vote.
pub fn tally_votes(votes: &[PlayerId]) -> Result<VoteTally, GameError> {
    let n = votes.len();
    let mut received = vec![0u32; n];
    for (voter, target) in votes.iter().enumerate() {
        if target.index() >= n {
            return Err(GameError::Validation(format!(
                "{} votes for nonexistent {}",
                PlayerId(voter as u8),
                target
            )));
        }
        if target.index() == voter {
            return Err(GameError::Validation(format!(
                "{} votes for itself",
                PlayerId(voter as u8)
            )));
        }
        received[target.index()] += 1;
    }
    let max = received.iter().copied().max().unwrap_or(0);
    let deaths = if max >= 2 {
        received
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == max)
            .map(|(i, _)| PlayerId(i as u8))
            .collect()
    } else {
        BTreeSet::new()
    };
    Ok(VoteTally { votes: votes.to_vec(), received, deaths })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    VillageWins,
    WerewolfWins,
    /// No Werewolf among the players but somebody died: neither win condition holds.
    NoWinner,
    /// Only produced under [`OutcomeRules::NoDeathDraw`].
    Draw,
}

impl Outcome {
    pub fn winner(self) -> Option<Team> {
        match self {
            Outcome::VillageWins => Some(Team::Village),
            Outcome::WerewolfWins => Some(Team::Werewolf),
            Outcome::NoWinner | Outcome::Draw => None,
        }
    }
}

/// Scoring convention for terminal states.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeRules {
    /// The written winning conditions: with a Werewolf among the players and no
    /// deaths, Team Werewolf wins.
    #[default]
    Standard,
    /// Identical except that a vote in which nobody dies while a Werewolf is among
    /// the players is scored as a draw (utility 0 for everyone). The closed-form
    /// three-player equilibrium utilities are derived under this convention.
    NoDeathDraw,
}

pub fn determine_outcome(final_roles: &[RoleCard], deaths: &BTreeSet<PlayerId>) -> Outcome {
    determine_outcome_with(final_roles, deaths, OutcomeRules::Standard)
}

pub fn determine_outcome_with(
    final_roles: &[RoleCard],
    deaths: &BTreeSet<PlayerId>,
    rules: OutcomeRules,
) -> Outcome {
    let any_werewolf = final_roles.contains(&RoleCard::Werewolf);
    let werewolf_died = deaths
        .iter()
        .any(|p| final_roles.get(p.index()) == Some(&RoleCard::Werewolf));
    if werewolf_died || (!any_werewolf && deaths.is_empty()) {
        Outcome::VillageWins
    } else if any_werewolf {
        if deaths.is_empty() && rules == OutcomeRules::NoDeathDraw {
            Outcome::Draw
        } else {
            Outcome::WerewolfWins
        }
    } else {
        Outcome::NoWinner
    }
}

/// +1 for the winning team, −1 for the losing one, 0 on a draw. With no winner
/// everyone loses.
pub fn utility(final_role: RoleCard, outcome: Outcome) -> i8 {
    match outcome {
        Outcome::Draw => 0,
        Outcome::NoWinner => -1,
        o => {
            if o.winner() == Some(final_role.team()) {
                1
            } else {
                -1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RoleCard::*;

    fn ids(v: &[u8]) -> Vec<PlayerId> {
        v.iter().map(|i| PlayerId(*i)).collect()
    }

    fn set(v: &[u8]) -> BTreeSet<PlayerId> {
        ids(v).into_iter().collect()
    }

    #[test]
    fn five_player_tie_kills_both() {
        // P1->P5, P2->P5, P3->P1, P4->P1, P5->P3
        let t = tally_votes(&ids(&[4, 4, 0, 0, 2])).unwrap();
        assert_eq!(t.deaths, set(&[0, 4]));
        assert_eq!(t.received, vec![2, 0, 1, 0, 2]);
    }

    #[test]
    fn cycle_kills_nobody() {
        let t = tally_votes(&ids(&[1, 2, 0])).unwrap();
        assert!(t.deaths.is_empty());
    }

    #[test]
    fn unique_maximum() {
        let t = tally_votes(&ids(&[1, 0, 0])).unwrap();
        assert_eq!(t.deaths, set(&[0]));
    }

    #[test]
    fn self_vote_rejected() {
        assert!(matches!(tally_votes(&ids(&[0, 0, 1])), Err(GameError::Validation(_))));
        assert!(matches!(tally_votes(&ids(&[1, 7, 1])), Err(GameError::Validation(_))));
    }

    #[test]
    fn outcomes() {
        let hard_final = [Werewolf, Seer, Insomniac, Robber, Troublemaker];
        assert_eq!(determine_outcome(&hard_final, &set(&[0, 4])), Outcome::VillageWins);
        let no_wolf = [Villager, Seer, Robber];
        assert_eq!(determine_outcome(&no_wolf, &set(&[])), Outcome::VillageWins);
        assert_eq!(determine_outcome(&no_wolf, &set(&[1])), Outcome::NoWinner);
        let one_wolf = [Werewolf, Seer, Robber];
        assert_eq!(determine_outcome(&one_wolf, &set(&[])), Outcome::WerewolfWins);
        assert_eq!(
            determine_outcome_with(&one_wolf, &set(&[]), OutcomeRules::NoDeathDraw),
            Outcome::Draw
        );
        assert_eq!(determine_outcome(&one_wolf, &set(&[1])), Outcome::WerewolfWins);
    }

    #[test]
    fn utilities() {
        assert_eq!(utility(Werewolf, Outcome::VillageWins), -1);
        assert_eq!(utility(Robber, Outcome::VillageWins), 1);
        assert_eq!(utility(Werewolf, Outcome::WerewolfWins), 1);
        assert_eq!(utility(Seer, Outcome::NoWinner), -1);
        assert_eq!(utility(Werewolf, Outcome::Draw), 0);
    }
}
