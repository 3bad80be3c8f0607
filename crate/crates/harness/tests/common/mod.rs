#![allow(dead_code)]

use std::collections::BTreeMap;

use onuw_agents::NightTable;
use onuw_core::{
    new_game, new_game_with_deal, Assignment, GameLog, GameSpec, GameState, PlayerId, Speech, Tactic, ALL_TACTICS,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PLACEHOLDER: &str = "placeholder speech";

/// Resolves the night with every seat on the default night table.
pub fn default_night(g: &mut GameState) {
    let n = g.player_count();
    let actions: BTreeMap<_, _> = g
        .players()
        .filter(|p| g.acts_at_night(*p))
        .map(|p| (p, NightTable::default_action(p, g.initial.role_of(p), n)))
        .collect();
    g.resolve_night(&actions).unwrap();
}

/// Finishes the discussion with the given tactic per (round, seat) and casts `votes`.
pub fn finish(mut g: GameState, tactic: impl Fn(u32, PlayerId) -> Option<Tactic>, votes: &[PlayerId]) -> GameLog {
    while let Some((round, player)) = g.next_speaker() {
        g.record_speech(Speech {
            round,
            player,
            tactic: tactic(round, player),
            text: PLACEHOLDER.into(),
            claims: vec![],
            belief: None,
        })
        .unwrap();
    }
    g.cast_votes(votes).unwrap();
    GameLog::from_state(&g)
}

/// Five-player games with random deals, random tactic labels and random legal votes.
pub fn synthetic_logs(count: usize, seed: u64) -> Vec<GameLog> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = new_game(GameSpec::five_player(rng.gen())).unwrap();
            default_night(&mut g);
            let labels: Vec<Tactic> = (0..15).map(|_| *ALL_TACTICS.choose(&mut rng).unwrap()).collect();
            let votes: Vec<PlayerId> = (0..5u8)
                .map(|i| PlayerId((i + rng.gen_range(1..5u8)) % 5))
                .collect();
            finish(g, |r, p| Some(labels[(r as usize - 1) * 5 + p.index()]), &votes)
        })
        .collect()
}

/// Easy preset deal with the default night, everyone voting Player 2 (who votes Player 1).
pub fn easy_log(tactic: impl Fn(u32, PlayerId) -> Option<Tactic>) -> GameLog {
    let p = onuw_core::presets::easy();
    let mut g = new_game_with_deal(p.spec, p.initial).unwrap();
    g.resolve_night(&p.night).unwrap();
    let votes = [PlayerId(1), PlayerId(0), PlayerId(1), PlayerId(1), PlayerId(1)];
    finish(g, tactic, &votes)
}

pub fn deal(roles: [onuw_core::RoleCard; 8]) -> Assignment {
    Assignment::new(roles[..5].to_vec(), [roles[5], roles[6], roles[7]])
}
