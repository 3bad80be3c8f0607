//! Game setup and the phase state machine (Night → Day rounds → Voting → Finished).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::belief::BeliefReport;
use crate::claim::Claim;
use crate::error::GameError;
use crate::night::{self, NightActionKind, NightRecord, Observation};
use crate::role::{PlayerId, RoleCard};
use crate::rules::{self, Outcome, OutcomeRules, VoteTally};
use crate::tactic::Tactic;

pub const DEFAULT_NIGHT_ORDER: [RoleCard; 5] = [
    RoleCard::Werewolf,
    RoleCard::Seer,
    RoleCard::Robber,
    RoleCard::Troublemaker,
    RoleCard::Insomniac,
];

pub const DEFAULT_DISCUSSION_ROUNDS: u32 = 3;
pub const POOL_SIZE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub player_count: usize,
    /// Multiset of cards in play, `player_count + 3` of them.
    pub candidate_roles: Vec<RoleCard>,
    pub night_order: Vec<RoleCard>,
    pub discussion_rounds: u32,
    pub rng_seed: u64,
    #[serde(default)]
    pub outcome_rules: OutcomeRules,
}

impl GameSpec {
    pub fn new(candidate_roles: Vec<RoleCard>, player_count: usize, rng_seed: u64) -> Self {
        GameSpec {
            player_count,
            candidate_roles,
            night_order: DEFAULT_NIGHT_ORDER.to_vec(),
            discussion_rounds: DEFAULT_DISCUSSION_ROUNDS,
            rng_seed,
            outcome_rules: OutcomeRules::Standard,
        }
    }

    /// Five players with 2 Werewolves, 2 Villagers, Seer, Robber, Troublemaker, Insomniac.
    pub fn five_player(rng_seed: u64) -> Self {
        use RoleCard::*;
        GameSpec::new(
            vec![Werewolf, Werewolf, Villager, Villager, Seer, Robber, Troublemaker, Insomniac],
            5,
            rng_seed,
        )
    }

    /// Default decks for 3–5 players.
    pub fn standard(player_count: usize, rng_seed: u64) -> Result<Self, GameError> {
        use RoleCard::*;
        let roles = match player_count {
            3 => vec![Werewolf, Werewolf, Villager, Seer, Robber, Troublemaker],
            4 => vec![Werewolf, Werewolf, Villager, Seer, Robber, Troublemaker, Insomniac],
            5 => return Ok(GameSpec::five_player(rng_seed)),
            n => return Err(GameError::Config(format!("player count {n} not in 3..=5"))),
        };
        Ok(GameSpec::new(roles, player_count, rng_seed))
    }

    /// Two Werewolves and a Robber with three Villagers in the pool.
    pub fn three_player_robber() -> Self {
        use RoleCard::*;
        GameSpec::new(vec![Werewolf, Werewolf, Robber, Villager, Villager, Villager], 3, 0)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if !(3..=5).contains(&self.player_count) {
            return Err(GameError::Config(format!(
                "player count {} not in 3..=5",
                self.player_count
            )));
        }
        if self.candidate_roles.len() != self.player_count + POOL_SIZE {
            return Err(GameError::Config(format!(
                "{} candidate roles for {} players (need {})",
                self.candidate_roles.len(),
                self.player_count,
                self.player_count + POOL_SIZE
            )));
        }
        if self.discussion_rounds == 0 {
            return Err(GameError::Config("discussion_rounds must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for r in &self.night_order {
            if !seen.insert(*r) {
                return Err(GameError::Config(format!("{r} appears twice in night order")));
            }
        }
        Ok(())
    }

    /// The candidate multiset as sorted counts, for conservation checks.
    pub fn role_counts(&self) -> BTreeMap<RoleCard, usize> {
        counts(self.candidate_roles.iter())
    }
}

fn counts<'a>(roles: impl Iterator<Item = &'a RoleCard>) -> BTreeMap<RoleCard, usize> {
    let mut m = BTreeMap::new();
    for r in roles {
        *m.entry(*r).or_insert(0) += 1;
    }
    m
}

/// Cards held by each player plus the three pool cards.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub player_roles: Vec<RoleCard>,
    pub pool: [RoleCard; POOL_SIZE],
}

impl Assignment {
    pub fn new(player_roles: Vec<RoleCard>, pool: [RoleCard; POOL_SIZE]) -> Self {
        Assignment { player_roles, pool }
    }

    pub fn role_counts(&self) -> BTreeMap<RoleCard, usize> {
        counts(self.player_roles.iter().chain(self.pool.iter()))
    }

    pub fn conserves(&self, spec: &GameSpec) -> bool {
        self.player_roles.len() == spec.player_count && self.role_counts() == spec.role_counts()
    }

    pub fn role_of(&self, p: PlayerId) -> RoleCard {
        self.player_roles[p.index()]
    }

    /// Every distinct arrangement of the spec's cards over seats and pool slots, in
    /// lexicographic order.
    pub fn all_arrangements(spec: &GameSpec) -> Vec<Assignment> {
        let mut cards = spec.candidate_roles.clone();
        cards.sort();
        let n = spec.player_count;
        let mut out = Vec::new();
        loop {
            out.push(Assignment {
                player_roles: cards[..n].to_vec(),
                pool: [cards[n], cards[n + 1], cards[n + 2]],
            });
            if !next_permutation(&mut cards) {
                break;
            }
        }
        out
    }
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.player_roles.iter().enumerate() {
            write!(f, "{}={} ", PlayerId(i as u8), r)?;
        }
        write!(f, "pool=[{}, {}, {}]", self.pool[0], self.pool[1], self.pool[2])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Night,
    /// Discussion round, starting at 1.
    Day(u32),
    Voting,
    Finished,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Night => write!(f, "Night"),
            Phase::Day(r) => write!(f, "Day round {r}"),
            Phase::Voting => write!(f, "Voting"),
            Phase::Finished => write!(f, "Finished"),
        }
    }
}

/// How the initial assignment was produced.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DealMode {
    /// Shuffled with the spec's seed.
    Seeded,
    /// Supplied by the caller (fixed settings, fixtures).
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Speech {
    pub round: u32,
    pub player: PlayerId,
    #[serde(default)]
    pub tactic: Option<Tactic>,
    pub text: String,
    #[serde(default)]
    pub claims: Vec<Claim>,
    /// The speaker's belief when it spoke, if recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub belief: Option<BeliefReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoteRecord {
    pub voter: PlayerId,
    pub target: PlayerId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Event {
    Night(NightRecord),
    Speech(Speech),
    Vote(VoteRecord),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub spec: GameSpec,
    pub deal: DealMode,
    pub initial: Assignment,
    pub current: Assignment,
    pub phase: Phase,
    pub events: Vec<Event>,
    pub tally: Option<VoteTally>,
    pub outcome: Option<Outcome>,
}

/// Deals with the spec's seed. The shuffle is the only consumer of the generator.
pub fn new_game(spec: GameSpec) -> Result<GameState, GameError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut cards = spec.candidate_roles.clone();
    cards.shuffle(&mut rng);
    let n = spec.player_count;
    let initial = Assignment::new(cards[..n].to_vec(), [cards[n], cards[n + 1], cards[n + 2]]);
    Ok(GameState::start(spec, initial, DealMode::Seeded))
}

/// Starts a game from a caller-supplied deal.
pub fn new_game_with_deal(spec: GameSpec, initial: Assignment) -> Result<GameState, GameError> {
    spec.validate()?;
    if !initial.conserves(&spec) {
        return Err(GameError::Config(format!(
            "deal {initial} does not match the candidate roles"
        )));
    }
    Ok(GameState::start(spec, initial, DealMode::Fixed))
}

impl GameState {
    fn start(spec: GameSpec, initial: Assignment, deal: DealMode) -> Self {
        GameState {
            current: initial.clone(),
            initial,
            spec,
            deal,
            phase: Phase::Night,
            events: Vec::new(),
            tally: None,
            outcome: None,
        }
    }

    pub fn player_count(&self) -> usize {
        self.spec.player_count
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        PlayerId::all(self.spec.player_count)
    }

    fn expect_phase(&self, ok: bool, expected: &str) -> Result<(), GameError> {
        if ok {
            Ok(())
        } else {
            Err(GameError::Phase { expected: expected.into(), found: self.phase.to_string() })
        }
    }

    fn check_player(&self, p: PlayerId) -> Result<(), GameError> {
        if p.index() < self.player_count() {
            Ok(())
        } else {
            Err(GameError::Validation(format!("{p} is not in this game")))
        }
    }

    pub fn legal_night_actions(&self, player: PlayerId) -> Result<Vec<NightActionKind>, GameError> {
        self.expect_phase(self.phase == Phase::Night, "Night")?;
        self.check_player(player)?;
        Ok(night::legal_actions_for(
            self.initial.role_of(player),
            player,
            self.player_count(),
            &self.spec.night_order,
        ))
    }

    /// Whether the player is woken at night.
    pub fn acts_at_night(&self, player: PlayerId) -> bool {
        night::is_called(self.initial.role_of(player), &self.spec.night_order)
    }

    /// Applies all night actions in call order and moves to the first Day round.
    pub fn resolve_night(
        &mut self,
        actions: &BTreeMap<PlayerId, NightActionKind>,
    ) -> Result<(), GameError> {
        self.expect_phase(self.phase == Phase::Night, "Night")?;
        let (current, records) =
            night::resolve_actions(&self.initial, &self.spec.night_order, actions)?;
        self.current = current;
        self.events.extend(records.into_iter().map(Event::Night));
        self.phase = Phase::Day(1);
        Ok(())
    }

    /// Who speaks next: ascending seat order within each round.
    pub fn next_speaker(&self) -> Option<(u32, PlayerId)> {
        let Phase::Day(round) = self.phase else {
            return None;
        };
        let spoken = self
            .speeches()
            .filter(|s| s.round == round)
            .count();
        Some((round, PlayerId(spoken as u8)))
    }

    pub fn record_speech(&mut self, speech: Speech) -> Result<(), GameError> {
        self.expect_phase(matches!(self.phase, Phase::Day(_)), "Day")?;
        let (round, speaker) = self.next_speaker().expect("day phase");
        if speech.round != round || speech.player != speaker {
            return Err(GameError::Validation(format!(
                "expected {speaker} to speak in round {round}, got {} in round {}",
                speech.player, speech.round
            )));
        }
        self.events.push(Event::Speech(speech));
        if speaker.index() + 1 == self.player_count() {
            self.phase = if round >= self.spec.discussion_rounds {
                Phase::Voting
            } else {
                Phase::Day(round + 1)
            };
        }
        Ok(())
    }

    /// Casts all votes simultaneously, then determines the winner.
    pub fn cast_votes(&mut self, votes: &[PlayerId]) -> Result<&VoteTally, GameError> {
        self.expect_phase(self.phase == Phase::Voting, "Voting")?;
        if votes.len() != self.player_count() {
            return Err(GameError::Validation(format!(
                "{} votes for {} players",
                votes.len(),
                self.player_count()
            )));
        }
        let tally = rules::tally_votes(votes)?;
        for (i, t) in votes.iter().enumerate() {
            self.events.push(Event::Vote(VoteRecord { voter: PlayerId(i as u8), target: *t }));
        }
        self.outcome = Some(rules::determine_outcome_with(
            &self.current.player_roles,
            &tally.deaths,
            self.spec.outcome_rules,
        ));
        self.tally = Some(tally);
        self.phase = Phase::Finished;
        Ok(self.tally.as_ref().unwrap())
    }

    /// Per-player utilities; `None` until the game is finished.
    pub fn utilities(&self) -> Option<Vec<i8>> {
        let outcome = self.outcome?;
        Some(
            self.current
                .player_roles
                .iter()
                .map(|r| rules::utility(*r, outcome))
                .collect(),
        )
    }

    pub fn deaths(&self) -> BTreeSet<PlayerId> {
        self.tally.as_ref().map(|t| t.deaths.clone()).unwrap_or_default()
    }

    pub fn speeches(&self) -> impl Iterator<Item = &Speech> {
        self.events.iter().filter_map(|e| match e {
            Event::Speech(s) => Some(s),
            _ => None,
        })
    }

    pub fn night_records(&self) -> impl Iterator<Item = &NightRecord> {
        self.events.iter().filter_map(|e| match e {
            Event::Night(r) => Some(r),
            _ => None,
        })
    }

    /// The player's own night action and what it saw, if it was woken.
    pub fn night_record_of(&self, player: PlayerId) -> Option<&NightRecord> {
        self.night_records().find(|r| r.actor == player)
    }

    pub fn private_observation(&self, player: PlayerId) -> Observation {
        self.night_record_of(player)
            .map(|r| r.observation.clone())
            .unwrap_or(Observation::Nothing)
    }
}
