mod common;

use common::{easy_log, synthetic_logs};
use onuw_core::{GameLog, PlayerId, Tactic};
use onuw_harness::{extract_transitions, run_experiment, ExperimentConfig, Resources, Setting};
use onuw_policy::{structural_dim, EncoderMode, PolicyError, RewardMode, TextEmbedder, TransitionsFile};
use proptest::prelude::*;

const ENC: EncoderMode = EncoderMode::Structural { rounds: 3 };

#[test]
fn hundred_twenty_logs_give_eighteen_hundred_rows() {
    let logs = synthetic_logs(120, 1);
    let ex = extract_transitions(&logs, RewardMode::PerStep, &ENC, None).unwrap();
    assert_eq!(ex.row_count(), 1800);
    assert_eq!((ex.speeches, ex.skipped), (1800, 0));
    assert_eq!(ex.trajectories.len(), 600);
    assert!(ex.trajectories.iter().all(|t| t.steps.len() == 3));
}

fn one_tactic(_: u32, p: PlayerId) -> Option<Tactic> {
    Some(if p == PlayerId(1) { Tactic::DeceptiveDefense } else { Tactic::HonestAccusation })
}

#[test]
fn reward_modes_on_hand_built_log() {
    let log = easy_log(one_tactic);
    let r = log.result.as_ref().unwrap();
    assert_eq!(r.utilities, vec![1, -1, 1, 1, 1]);
    let rewards = |mode, p: u8| -> Vec<f64> {
        let ex = extract_transitions(std::slice::from_ref(&log), mode, &ENC, None).unwrap();
        ex.trajectories.iter().find(|t| t.player == PlayerId(p)).unwrap().steps.iter().map(|s| s.reward).collect()
    };
    assert_eq!(rewards(RewardMode::PerStep, 0), vec![1.0, 1.0, 1.0]);
    assert_eq!(rewards(RewardMode::TerminalOnly, 0), vec![0.0, 0.0, 1.0]);
    assert_eq!(rewards(RewardMode::PerStep, 1), vec![-1.0, -1.0, -1.0]);
    assert_eq!(rewards(RewardMode::TerminalOnly, 1), vec![0.0, 0.0, -1.0]);
}

#[test]
fn steps_chain_and_encode_what_the_speaker_saw() {
    let log = easy_log(one_tactic);
    let ex = extract_transitions(std::slice::from_ref(&log), RewardMode::PerStep, &ENC, None).unwrap();
    let dim = structural_dim(3);
    assert_eq!(ex.header.state_dim, dim);
    for t in &ex.trajectories {
        let s = &t.steps;
        assert_eq!(s[0].next_state, s[1].state);
        assert_eq!(s[1].next_state, s[2].state);
        assert_eq!(s.iter().map(|x| x.terminal).collect::<Vec<_>>(), vec![false, false, true]);
        // Round one-hot sits right after the 5 × 6 marginals.
        for (k, step) in s.iter().enumerate() {
            assert_eq!(&step.state[30..34], &one_hot(k), "player {} step {k}", t.player);
        }
        assert_eq!(&s[2].next_state[30..34], &one_hot(3));
        // No logged belief: uniform marginals.
        assert!(s[0].state[..30].iter().all(|&x| x == 1.0 / 6.0));
        let own_team = s[0].state[dim - 1];
        assert_eq!(own_team, if t.player == PlayerId(1) { 1.0 } else { 0.0 });
        let tactic = if t.player == PlayerId(1) { Tactic::DeceptiveDefense } else { Tactic::HonestAccusation };
        assert!(s.iter().all(|x| x.tactic == tactic.index()));
    }
}

fn one_hot(k: usize) -> [f64; 4] {
    let mut v = [0.0; 4];
    v[k] = 1.0;
    v
}

#[test]
fn unlabeled_speeches_are_skipped_and_counted() {
    let log = easy_log(|r, p| if r == 2 && p == PlayerId(3) { None } else { Some(Tactic::HonestEvidence) });
    let ex = extract_transitions(std::slice::from_ref(&log), RewardMode::TerminalOnly, &ENC, None).unwrap();
    assert_eq!((ex.row_count(), ex.skipped), (14, 1));
    let p4 = ex.trajectories.iter().find(|t| t.player == PlayerId(3)).unwrap();
    assert_eq!(p4.steps.len(), 2);
    assert_eq!(p4.steps.iter().map(|s| s.reward).collect::<Vec<_>>(), vec![0.0, 1.0]);

    let mut partial = log.clone();
    partial.valid = false;
    let ex = extract_transitions(&[partial, log], RewardMode::PerStep, &ENC, None).unwrap();
    assert_eq!((ex.speeches, ex.row_count(), ex.skipped), (30, 14, 16));
}

#[test]
fn logged_beliefs_feed_the_features() {
    let mut cfg = ExperimentConfig::scripted(Setting::FiveEasy);
    cfg.repeats = 2;
    for s in &mut cfg.seats {
        s.random_tactic = true;
    }
    let logs = run_experiment(&cfg, &Resources::offline()).unwrap();
    let ex = extract_transitions(&logs, RewardMode::PerStep, &ENC, None).unwrap();
    assert_eq!(ex.row_count(), 30);
    // The Seer saw the Robber's card, so its own marginals are not uniform.
    let seer = ex.trajectories.iter().find(|t| t.player == PlayerId(2)).unwrap();
    assert!(seer.steps[0].state[..30].iter().any(|&x| x != 1.0 / 6.0));
}

struct Lengths(usize);

impl TextEmbedder for Lengths {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, PolicyError> {
        Ok(texts.iter().map(|t| vec![t.len() as f64; self.0]).collect())
    }
}

#[test]
fn remote_features_use_the_embedder() {
    let log = easy_log(one_tactic);
    let enc = EncoderMode::Remote { model: "stub".into(), dim: 4 };
    let ex = extract_transitions(std::slice::from_ref(&log), RewardMode::PerStep, &enc, Some(&Lengths(4))).unwrap();
    assert_eq!(ex.header.state_dim, 4);
    let s = &ex.trajectories[0].steps;
    // Text grows as the history grows.
    assert!(s[0].state[0] < s[1].state[0] && s[1].state[0] < s[2].state[0]);
    assert!(extract_transitions(std::slice::from_ref(&log), RewardMode::PerStep, &enc, None).is_err());
    assert!(extract_transitions(&[log], RewardMode::PerStep, &enc, Some(&Lengths(3))).is_err());
}

#[test]
fn file_round_trip() {
    let ex = extract_transitions(&synthetic_logs(3, 9), RewardMode::TerminalOnly, &ENC, None).unwrap();
    let mut buf = Vec::new();
    ex.to_file().write(&mut buf).unwrap();
    let back = TransitionsFile::read(buf.as_slice()).unwrap();
    assert_eq!(back, ex.to_file());
    assert_eq!(back.rows.len(), 45);
}

fn count_speeches(logs: &[GameLog]) -> usize {
    logs.iter().map(|l| l.events.iter().filter(|e| matches!(e, onuw_core::Event::Speech(_))).count()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rows_plus_skipped_equals_speeches(
        seed in 0u64..1000,
        mask in proptest::collection::vec(any::<bool>(), 45),
        invalid in proptest::collection::vec(any::<bool>(), 3),
    ) {
        let mut logs = synthetic_logs(3, seed);
        for (li, log) in logs.iter_mut().enumerate() {
            log.valid = !invalid[li];
            let mut k = 0;
            for e in &mut log.events {
                if let onuw_core::Event::Speech(s) = e {
                    if mask[li * 15 + k] {
                        s.tactic = None;
                    }
                    k += 1;
                }
            }
        }
        let ex = extract_transitions(&logs, RewardMode::PerStep, &ENC, None).unwrap();
        prop_assert_eq!(ex.speeches, count_speeches(&logs));
        prop_assert_eq!(ex.row_count() + ex.skipped, ex.speeches);
        for t in &ex.trajectories {
            prop_assert!(t.steps.last().unwrap().terminal);
            prop_assert!(t.steps.iter().all(|s| s.state.len() == structural_dim(3)));
        }
    }
}
