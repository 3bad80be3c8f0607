use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The six supported role cards.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoleCard {
    Werewolf,
    Villager,
    Seer,
    Robber,
    Troublemaker,
    Insomniac,
}

pub const ALL_ROLES: [RoleCard; 6] = [
    RoleCard::Werewolf,
    RoleCard::Villager,
    RoleCard::Seer,
    RoleCard::Robber,
    RoleCard::Troublemaker,
    RoleCard::Insomniac,
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Team {
    Village,
    Werewolf,
}

impl RoleCard {
    pub fn team(self) -> Team {
        match self {
            RoleCard::Werewolf => Team::Werewolf,
            _ => Team::Village,
        }
    }

    /// Position in [`ALL_ROLES`]; used as the column index of role marginals.
    pub fn index(self) -> usize {
        match self {
            RoleCard::Werewolf => 0,
            RoleCard::Villager => 1,
            RoleCard::Seer => 2,
            RoleCard::Robber => 3,
            RoleCard::Troublemaker => 4,
            RoleCard::Insomniac => 5,
        }
    }

    pub fn from_index(idx: usize) -> Option<RoleCard> {
        ALL_ROLES.get(idx).copied()
    }

    /// Whether the role wakes up during the night.
    pub fn has_night_ability(self) -> bool {
        !matches!(self, RoleCard::Villager)
    }

    pub fn name(self) -> &'static str {
        match self {
            RoleCard::Werewolf => "Werewolf",
            RoleCard::Villager => "Villager",
            RoleCard::Seer => "Seer",
            RoleCard::Robber => "Robber",
            RoleCard::Troublemaker => "Troublemaker",
            RoleCard::Insomniac => "Insomniac",
        }
    }
}

impl fmt::Display for RoleCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoleCard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        ALL_ROLES
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| format!("unknown role `{t}`"))
    }
}

/// Zero-based seat index. Displayed one-based ("Player 1").
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub u8);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// All seats of an `n`-player game in speaking order.
    pub fn all(n: usize) -> impl Iterator<Item = PlayerId> {
        (0..n as u8).map(PlayerId)
    }

    pub fn name(self) -> String {
        format!("Player {}", self.0 as u32 + 1)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Player {}", self.0 as u32 + 1)
    }
}

impl FromStr for PlayerId {
    type Err = String;

    /// Accepts "Player 3", "player3", "P3" or "3" (all one-based).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let digits = t
            .strip_prefix("player")
            .or_else(|| t.strip_prefix('p'))
            .unwrap_or(&t)
            .trim();
        let n: u32 = digits
            .parse()
            .map_err(|_| format!("cannot parse player `{}`", s.trim()))?;
        if n == 0 || n > 255 {
            return Err(format!("player number {n} out of range"));
        }
        Ok(PlayerId((n - 1) as u8))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_roles_and_teams() {
        assert_eq!(ALL_ROLES.len(), 6);
        for (i, r) in ALL_ROLES.iter().enumerate() {
            assert_eq!(r.index(), i);
            let expected = if *r == RoleCard::Werewolf { Team::Werewolf } else { Team::Village };
            assert_eq!(r.team(), expected);
        }
    }

    #[test]
    fn player_names_parse() {
        assert_eq!("Player 3".parse::<PlayerId>().unwrap(), PlayerId(2));
        assert_eq!("player5".parse::<PlayerId>().unwrap(), PlayerId(4));
        assert_eq!("P1".parse::<PlayerId>().unwrap(), PlayerId(0));
        assert!("Player 0".parse::<PlayerId>().is_err());
        assert!("nobody".parse::<PlayerId>().is_err());
        assert_eq!(PlayerId(1).to_string(), "Player 2");
    }
}
