use std::collections::BTreeSet;
use std::path::PathBuf;

use onuw_core::presets;
use onuw_core::{
    new_game, new_game_with_deal, replay, Claim, ClaimTime, Event, GameError, GameLog, GameSpec,
    Outcome, PlayerId, RoleCard, Speech, Tactic,
};
use proptest::prelude::*;

fn p(k: u8) -> PlayerId {
    PlayerId(k - 1)
}

fn claim(subject: u8, role: RoleCard, time: ClaimTime, honest: bool) -> Claim {
    Claim { subject: p(subject), role, negated: false, time, honest }
}

/// The hard-setting match with five votes: P1→P5, P2→P5, P3→P1, P4→P1, P5→P3.
fn hard_sample_log() -> GameLog {
    use RoleCard::*;
    let preset = presets::hard();
    let mut g = new_game_with_deal(preset.spec, preset.initial).unwrap();
    g.resolve_night(&preset.night).unwrap();
    let tactics = [
        [Tactic::DeceptiveEvidence, Tactic::HonestEvidence, Tactic::HonestAccusation, Tactic::DeceptiveDefense, Tactic::HonestAccusation],
        [Tactic::DeceptiveDefense, Tactic::HonestEvidence, Tactic::HonestDefense, Tactic::DeceptiveEvidence, Tactic::HonestAccusation],
        [Tactic::DeceptiveAccusation, Tactic::HonestEvidence, Tactic::HonestEvidence, Tactic::DeceptiveDefense, Tactic::HonestDefense],
    ];
    for round in 1..=3u32 {
        for seat in 1..=5u8 {
            let tactic = tactics[round as usize - 1][seat as usize - 1];
            let claims = match (round, seat) {
                (1, 1) => vec![claim(1, Seer, ClaimTime::Initial, false)],
                (1, 2) => vec![claim(2, Insomniac, ClaimTime::Initial, true), claim(2, Seer, ClaimTime::Final, true)],
                (2, 4) => vec![claim(2, Werewolf, ClaimTime::Final, false)],
                (3, 3) => vec![claim(4, Werewolf, ClaimTime::Initial, true)],
                (3, 5) => vec![claim(5, Troublemaker, ClaimTime::Initial, true)],
                _ => vec![],
            };
            g.record_speech(Speech {
                round,
                player: p(seat),
                tactic: Some(tactic),
                text: format!("{} speaks in round {round} using {}.", p(seat), tactic.label()),
                claims,
                belief: None,
            })
            .unwrap();
        }
    }
    g.cast_votes(&[p(5), p(5), p(1), p(1), p(3)]).unwrap();
    GameLog::from_state(&g)
}

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hard_sample.json")
}

#[test]
fn hard_sample_fixture_replays_to_village_win() {
    if std::env::var_os("ONUW_WRITE_FIXTURES").is_some() {
        hard_sample_log().write(fixture_path()).unwrap();
    }
    let log = GameLog::read(fixture_path()).unwrap();
    assert_eq!(log, hard_sample_log());
    let state = replay(&log).unwrap();
    assert_eq!(state.outcome, Some(Outcome::VillageWins));
    assert_eq!(state.deaths(), BTreeSet::from([p(1), p(5)]));
    assert_eq!(
        state.current.player_roles,
        vec![RoleCard::Werewolf, RoleCard::Seer, RoleCard::Insomniac, RoleCard::Robber, RoleCard::Troublemaker]
    );
    assert_eq!(state.utilities().unwrap(), vec![-1, 1, 1, 1, 1]);
}

#[test]
fn round_trip_is_bit_exact() {
    let log = hard_sample_log();
    let text = log.to_json();
    let back = GameLog::parse(&text).unwrap();
    assert_eq!(back, log);
    assert_eq!(back.to_json(), text);
}

#[test]
fn empty_events_is_incomplete() {
    let mut log = hard_sample_log();
    log.events.clear();
    assert!(matches!(replay(&log), Err(GameError::IncompleteLog(_))));
}

#[test]
fn tampered_vote_is_located() {
    let mut log = hard_sample_log();
    let (idx, _, _) = log.votes()[2];
    if let Event::Vote(v) = &mut log.events[idx] {
        v.target = p(2);
    }
    match replay(&log) {
        Err(GameError::Integrity { event: Some(i), .. }) => {
            assert!(matches!(log.events[i], Event::Vote(_)));
            if let Event::Vote(v) = &log.events[i] {
                assert_eq!(v.target, p(2));
            }
        }
        other => panic!("expected integrity error, got {other:?}"),
    }
}

#[test]
fn tampered_outcome_is_detected() {
    let mut log = hard_sample_log();
    log.result.as_mut().unwrap().outcome = Outcome::WerewolfWins;
    assert!(matches!(replay(&log), Err(GameError::Integrity { event: None, .. })));
}

#[test]
fn tampered_night_is_located() {
    let mut log = hard_sample_log();
    if let Event::Night(r) = &mut log.events[1] {
        r.observation = onuw_core::Observation::SawPlayer { target: p(4), role: RoleCard::Villager };
    }
    assert!(matches!(replay(&log), Err(GameError::Integrity { event: Some(1), .. })));
}

#[test]
fn wrong_mapping_rejected() {
    let mut log = hard_sample_log();
    log.tactic_mapping.swap(0, 1);
    assert!(matches!(GameLog::parse(&log.to_json()), Err(GameError::Parse(_))));
}

#[test]
fn partial_log_replays_when_flagged_invalid() {
    let mut log = hard_sample_log();
    log.events.truncate(10);
    log.result = None;
    log.valid = false;
    let state = replay(&log).unwrap();
    assert!(state.outcome.is_none());
    log.valid = true;
    assert!(matches!(replay(&log), Err(GameError::IncompleteLog(_))));
}

/// Plays a seeded game with the first legal action and fixed votes.
fn seeded_log(seed: u64, n: usize) -> GameLog {
    let spec = GameSpec::standard(n, seed).unwrap();
    let mut g = new_game(spec).unwrap();
    let actions = g
        .players()
        .map(|pl| (pl, *g.legal_night_actions(pl).unwrap().last().unwrap()))
        .collect();
    g.resolve_night(&actions).unwrap();
    while let Some((round, player)) = g.next_speaker() {
        g.record_speech(Speech {
            round,
            player,
            tactic: None,
            text: String::new(),
            claims: vec![],
            belief: None,
        })
        .unwrap();
    }
    let votes: Vec<_> = g.players().map(|q| PlayerId(((q.0 as usize + 1) % n) as u8)).collect();
    g.cast_votes(&votes).unwrap();
    GameLog::from_state(&g)
}

proptest! {
    #[test]
    fn identical_inputs_give_identical_logs(seed in any::<u64>(), n in 3usize..=5) {
        let a = seeded_log(seed, n).to_json();
        let b = seeded_log(seed, n).to_json();
        prop_assert_eq!(&a, &b);
        let log = GameLog::parse(&a).unwrap();
        let state = replay(&log).unwrap();
        prop_assert!(state.initial.conserves(&state.spec));
        prop_assert!(state.current.conserves(&state.spec));
    }

    #[test]
    fn parse_never_panics(text in ".{0,200}") {
        let _ = GameLog::parse(&text);
    }
}

#[test]
fn seeded_log_with_wrong_deal_rejected() {
    let mut log = seeded_log(11, 5);
    let roles = &mut log.initial.player_roles;
    let j = (1..roles.len()).find(|&j| roles[j] != roles[0]).unwrap();
    roles.swap(0, j);
    assert!(matches!(replay(&log), Err(GameError::Integrity { event: None, .. })));
}
