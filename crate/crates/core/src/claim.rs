//! Machine-readable claims attached to speeches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::role::{PlayerId, RoleCard};

/// Which card a claim talks about.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaimTime {
    /// The card dealt at the start ("I was the Seer", "I saw Player 4 is the Robber").
    Initial,
    /// The card held after the night ("Player 1 is a Werewolf now").
    Final,
}

/// "`subject` is (not) `role`". The `honest` flag is the speaker's own intent and is
/// logged for statistics only; listeners never get to see it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Claim {
    pub subject: PlayerId,
    pub role: RoleCard,
    pub negated: bool,
    pub time: ClaimTime,
    pub honest: bool,
}

impl Claim {
    pub fn holds(&self, initial_role: RoleCard, final_role: RoleCard) -> bool {
        let role = match self.time {
            ClaimTime::Initial => initial_role,
            ClaimTime::Final => final_role,
        };
        (role == self.role) != self.negated
    }

    /// The same claim with the intent flag erased, as seen by a listener.
    pub fn public(&self) -> Claim {
        Claim { honest: true, ..self.clone() }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match (self.time, self.negated) {
            (ClaimTime::Initial, false) => "was",
            (ClaimTime::Initial, true) => "was not",
            (ClaimTime::Final, false) => "is",
            (ClaimTime::Final, true) => "is not",
        };
        write!(f, "{} {} the {}", self.subject, verb, self.role)
    }
}
