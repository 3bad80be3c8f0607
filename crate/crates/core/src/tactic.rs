use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Discrete discussion tactic. The index order is part of every artifact format
/// (game logs, transition datasets, Q-function files) and must not change.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tactic {
    HonestEvidence,
    DeceptiveEvidence,
    HonestAccusation,
    DeceptiveAccusation,
    HonestDefense,
    DeceptiveDefense,
}

pub const TACTIC_COUNT: usize = 6;

pub const ALL_TACTICS: [Tactic; TACTIC_COUNT] = [
    Tactic::HonestEvidence,
    Tactic::DeceptiveEvidence,
    Tactic::HonestAccusation,
    Tactic::DeceptiveAccusation,
    Tactic::HonestDefense,
    Tactic::DeceptiveDefense,
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TacticCategory {
    Evidence,
    Accusation,
    Defense,
}

impl Tactic {
    pub fn index(self) -> usize {
        ALL_TACTICS.iter().position(|t| *t == self).unwrap()
    }

    pub fn from_index(idx: usize) -> Option<Tactic> {
        ALL_TACTICS.get(idx).copied()
    }

    pub fn is_honest(self) -> bool {
        matches!(
            self,
            Tactic::HonestEvidence | Tactic::HonestAccusation | Tactic::HonestDefense
        )
    }

    pub fn category(self) -> TacticCategory {
        match self {
            Tactic::HonestEvidence | Tactic::DeceptiveEvidence => TacticCategory::Evidence,
            Tactic::HonestAccusation | Tactic::DeceptiveAccusation => TacticCategory::Accusation,
            Tactic::HonestDefense | Tactic::DeceptiveDefense => TacticCategory::Defense,
        }
    }

    /// Human readable label, e.g. "Deceptive Evidence".
    pub fn label(self) -> &'static str {
        match self {
            Tactic::HonestEvidence => "Honest Evidence",
            Tactic::DeceptiveEvidence => "Deceptive Evidence",
            Tactic::HonestAccusation => "Honest Accusation",
            Tactic::DeceptiveAccusation => "Deceptive Accusation",
            Tactic::HonestDefense => "Honest Defense",
            Tactic::DeceptiveDefense => "Deceptive Defense",
        }
    }

    /// The `index=Name` list written into artifact headers.
    pub fn mapping() -> Vec<String> {
        ALL_TACTICS
            .iter()
            .map(|t| format!("{}={:?}", t.index(), t))
            .collect()
    }

    /// Checks a header mapping written by [`Tactic::mapping`].
    pub fn mapping_matches(mapping: &[String]) -> bool {
        mapping == Tactic::mapping().as_slice()
    }
}

impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Tactic {
    type Err = String;

    /// Case- and separator-insensitive: "deceptive evidence", "DeceptiveEvidence",
    /// "deceptive_evidence" all parse.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        ALL_TACTICS
            .iter()
            .copied()
            .find(|t| format!("{t:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| format!("unknown tactic `{}`", s.trim()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_mapping_is_listing_order() {
        assert_eq!(Tactic::HonestEvidence.index(), 0);
        assert_eq!(Tactic::DeceptiveEvidence.index(), 1);
        assert_eq!(Tactic::HonestAccusation.index(), 2);
        assert_eq!(Tactic::DeceptiveDefense.index(), 5);
        for t in ALL_TACTICS {
            assert_eq!(Tactic::from_index(t.index()), Some(t));
        }
        assert!(Tactic::mapping_matches(&Tactic::mapping()));
    }

    #[test]
    fn parse_labels() {
        assert_eq!("deceptive evidence".parse::<Tactic>(), Ok(Tactic::DeceptiveEvidence));
        assert_eq!("Honest_Defense".parse::<Tactic>(), Ok(Tactic::HonestDefense));
        assert!("sneaky".parse::<Tactic>().is_err());
    }

    #[test]
    fn polarity() {
        let honest: Vec<_> = ALL_TACTICS.iter().filter(|t| t.is_honest()).collect();
        assert_eq!(honest.len(), 3);
    }
}
