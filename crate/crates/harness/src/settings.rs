//! Game settings used by experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use onuw_core::presets;
use onuw_core::{new_game, new_game_with_deal, GameSpec, GameState, NightActionKind, OutcomeRules, PlayerId};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Two Werewolves at seats 1 and 2, the Robber at seat 3, three Villagers in the pool.
    ThreePlayer,
    /// Fixed five-player deal where the night leaves the Werewolf easy to find.
    FiveEasy,
    /// Fixed five-player deal with a tangled night.
    FiveHard,
    /// Five players, deal drawn from the seed.
    #[default]
    FiveStandard,
}

pub const ALL_SETTINGS: [Setting; 4] =
    [Setting::ThreePlayer, Setting::FiveEasy, Setting::FiveHard, Setting::FiveStandard];

impl Setting {
    pub fn player_count(self) -> usize {
        match self {
            Setting::ThreePlayer => 3,
            _ => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Setting::ThreePlayer => "three_player",
            Setting::FiveEasy => "five_easy",
            Setting::FiveHard => "five_hard",
            Setting::FiveStandard => "five_standard",
        }
    }

    /// The night actions that go with a fixed preset deal.
    pub fn preset_night(self) -> Option<BTreeMap<PlayerId, NightActionKind>> {
        match self {
            Setting::FiveEasy => Some(presets::easy().night),
            Setting::FiveHard => Some(presets::hard().night),
            _ => None,
        }
    }

    /// A fresh game for one repeat. Fixed settings ignore the seed for the deal.
    pub fn new_game(self, seed: u64, rules: OutcomeRules) -> Result<GameState, HarnessError> {
        let fixed = |mut spec: GameSpec, deal| {
            spec.rng_seed = seed;
            spec.outcome_rules = rules;
            new_game_with_deal(spec, deal)
        };
        let state = match self {
            Setting::ThreePlayer => fixed(
                GameSpec::three_player_robber(),
                onuw_equilibrium::three_player::initial_deal(),
            )?,
            Setting::FiveEasy => {
                let p = presets::easy();
                fixed(p.spec, p.initial)?
            }
            Setting::FiveHard => {
                let p = presets::hard();
                fixed(p.spec, p.initial)?
            }
            Setting::FiveStandard => {
                let mut spec = GameSpec::five_player(seed);
                spec.outcome_rules = rules;
                new_game(spec)?
            }
        };
        Ok(state)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_SETTINGS
            .into_iter()
            .find(|x| x.name() == s.replace('-', "_"))
            .ok_or_else(|| HarnessError::Config(format!("unknown setting `{s}`")))
    }
}

/// Independent sub-seed number `stream` of `base`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.next_u64()
}
