use std::io::{Cursor, Write};
use std::sync::{Arc, Mutex};

use onuw_core::{Event, NightActionKind, PlayerId, Tactic};
use onuw_harness::{interactive_seat, ExperimentConfig, Resources, Setting};

#[derive(Clone, Default)]
struct Screen(Arc<Mutex<Vec<u8>>>);

impl Write for Screen {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.lock().unwrap().extend_from_slice(buf);
        Ok(buf.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

impl Screen {
    fn text(&self) -> String {
        String::from_utf8(self.0.lock().unwrap().clone()).unwrap()
    }
}

/// Werewolves at seats 1 and 2 that vote for each other.
fn wolves_vote_each_other() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::scripted(Setting::ThreePlayer);
    cfg.seats[0].vote = Some(PlayerId(1));
    cfg.seats[1].vote = Some(PlayerId(0));
    cfg
}

fn play(cfg: &ExperimentConfig, seat: u8, input: &str) -> (onuw_core::GameLog, String) {
    let screen = Screen::default();
    let log = interactive_seat(
        cfg,
        &Resources::offline(),
        PlayerId(seat),
        0,
        Box::new(Cursor::new(input.to_string())),
        Box::new(screen.clone()),
    )
    .unwrap();
    (log, screen.text())
}

#[test]
fn robber_switching_and_voting_the_victim_wins() {
    // Switch with Player 1, three speeches (one with a tactic), a self-vote that is
    // refused, then a vote for Player 1.
    let input = "2\n\nplaceholder one\n5\nplaceholder two\n\nplaceholder three\n3\n1\n";
    let (log, screen) = play(&wolves_vote_each_other(), 2, input);
    assert!(log.valid, "{:?}", log.flags);
    assert!(screen.contains("you cannot vote for yourself"));
    let r = log.result.unwrap();
    assert_eq!(r.utilities[2], 1);
    let night = log.events.iter().find_map(|e| match e {
        Event::Night(n) if n.actor == PlayerId(2) => Some(n.action),
        _ => None,
    });
    assert_eq!(night, Some(NightActionKind::RobberSwitch(PlayerId(0))));
    let mine: Vec<_> = log
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Speech(s) if s.player == PlayerId(2) => Some(s.tactic),
            _ => None,
        })
        .collect();
    assert_eq!(mine, vec![None, Some(Tactic::HonestDefense), None]);
}

#[test]
fn bad_inputs_are_reprompted() {
    let input = "9\nzero\n1\n7\n\n\nnow something\n\nplaceholder\n\nplaceholder\n0\n2\n";
    let (log, screen) = play(&wolves_vote_each_other(), 2, input);
    assert!(log.valid, "{:?}", log.flags);
    assert!(screen.matches("Not allowed").count() >= 5, "{screen}");
    assert_eq!(log.votes()[2].2, PlayerId(1));
}

#[test]
fn quitting_leaves_a_flagged_partial_log() {
    let (log, _) = play(&wolves_vote_each_other(), 2, "2\n\nplaceholder\nquit\n");
    assert!(!log.valid);
    assert!(log.result.is_none());
    assert!(log.flags.iter().any(|f| f.starts_with("aborted:")));
    // Round 1 in full, then the two Werewolves of round 2 before the human's turn.
    assert_eq!(log.events.iter().filter(|e| matches!(e, Event::Speech(_))).count(), 5);

    let (log, _) = play(&wolves_vote_each_other(), 2, "");
    assert!(!log.valid);
}

#[test]
fn seat_must_exist() {
    let cfg = wolves_vote_each_other();
    let r = interactive_seat(
        &cfg,
        &Resources::offline(),
        PlayerId(3),
        0,
        Box::new(Cursor::new(String::new())),
        Box::new(std::io::sink()),
    );
    assert!(r.is_err());
}
