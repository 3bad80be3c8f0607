mod common;

use common::{easy_log, synthetic_logs};
use onuw_agents::AgentConfig;
use onuw_core::{PlayerId, RoleCard, Tactic, ALL_TACTICS};
use onuw_harness::{run_tournament, tactic_statistics, Lineup, Resources, Setting, TournamentConfig};
use proptest::prelude::*;

#[test]
fn every_werewolf_speech_deceptive_evidence() {
    // Easy deal: Player 2 was dealt the Werewolf.
    let log = easy_log(|_, p| Some(if p == PlayerId(1) { Tactic::DeceptiveEvidence } else { Tactic::HonestEvidence }));
    let t = tactic_statistics(&[log]);
    let w = t.row(RoleCard::Werewolf);
    assert_eq!(w.percent, [0.0, 100.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(w.counts.iter().sum::<u64>(), 3);
    assert!(!w.empty);
}

#[test]
fn six_and_four_villager_speeches() {
    // Player 5 holds the Villager card in the easy deal: 3 speeches per log.
    let plan = [Tactic::HonestEvidence, Tactic::HonestEvidence, Tactic::HonestAccusation];
    let mut logs: Vec<_> = (0..2)
        .map(|_| easy_log(|r, _| Some(plan[r as usize - 1])))
        .collect();
    logs.push(easy_log(|r, p| match (r, p.index()) {
        (1, 4) => Some(Tactic::HonestEvidence),
        (2, 4) => Some(Tactic::HonestEvidence),
        (3, 4) => Some(Tactic::HonestAccusation),
        _ => Some(Tactic::HonestDefense),
    }));
    // Add one extra Villager speech with a fourth log, unlabeled elsewhere.
    logs.push(easy_log(|r, p| if r == 1 && p.index() == 4 { Some(Tactic::HonestAccusation) } else { None }));
    let t = tactic_statistics(&logs);
    let v = t.row(RoleCard::Villager);
    assert_eq!(v.counts[Tactic::HonestEvidence.index()], 6);
    assert_eq!(v.counts[Tactic::HonestAccusation.index()], 4);
    assert!((v.percent[Tactic::HonestEvidence.index()] - 60.0).abs() < 1e-12);
    assert!((v.percent[Tactic::HonestAccusation.index()] - 40.0).abs() < 1e-12);
    assert_eq!(t.unlabeled, 14);
}

#[test]
fn roles_without_speeches_are_flagged() {
    let t = tactic_statistics(&[easy_log(|_, _| Some(Tactic::HonestDefense))]);
    // The easy deal has no Insomniac among the players.
    let ins = t.row(RoleCard::Insomniac);
    assert!(ins.empty);
    assert_eq!(ins.percent, [0.0; 6]);
    assert!(t.render_text().contains("(no speeches)"));
    let mut csv = Vec::new();
    t.write_csv(&mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.lines().next().unwrap().starts_with("role,Honest Evidence,"));
}

#[test]
fn deceptive_scripted_werewolves_dominate_their_row() {
    let fixed = |t| AgentConfig { fixed_tactic: Some(t), ..AgentConfig::scripted() };
    let cfg = TournamentConfig {
        setting: Setting::FiveStandard,
        village: vec![Lineup::new("random", AgentConfig { random_tactic: true, ..AgentConfig::scripted() })],
        werewolf: vec![
            Lineup::new("evidence", fixed(Tactic::DeceptiveEvidence)),
            Lineup::new("accuse", fixed(Tactic::DeceptiveAccusation)),
            Lineup::new("random", AgentConfig { random_tactic: true, ..AgentConfig::scripted() }),
        ],
        repeats: 3,
        seed: 8,
        ..TournamentConfig::default()
    };
    let (_, logs) = run_tournament(&cfg, &Resources::offline()).unwrap();
    let t = tactic_statistics(&logs);
    let w = t.row(RoleCard::Werewolf);
    // Independent count over the logs.
    let (mut deceptive, mut total) = (0u64, 0u64);
    for l in &logs {
        for e in &l.events {
            if let onuw_core::Event::Speech(s) = e {
                if l.initial.role_of(s.player) == RoleCard::Werewolf {
                    total += 1;
                    deceptive += !s.tactic.unwrap().is_honest() as u64;
                }
            }
        }
    }
    let share: f64 = ALL_TACTICS.iter().filter(|t| !t.is_honest()).map(|t| w.percent[t.index()]).sum();
    assert!((share - 100.0 * deceptive as f64 / total as f64).abs() < 1e-9);
    assert!(share > 50.0, "deceptive share {share}");
    for d in ALL_TACTICS.iter().filter(|t| !t.is_honest()) {
        for h in ALL_TACTICS.iter().filter(|t| t.is_honest()) {
            if matches!(d, Tactic::DeceptiveEvidence | Tactic::DeceptiveAccusation) {
                assert!(w.percent[d.index()] > w.percent[h.index()]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rows_sum_to_hundred(count in 1usize..6, seed in 0u64..500) {
        let t = tactic_statistics(&synthetic_logs(count, seed));
        for r in &t.rows {
            let s: f64 = r.percent.iter().sum();
            if r.empty {
                prop_assert_eq!(s, 0.0);
            } else {
                prop_assert!((s - 100.0).abs() <= 0.1);
            }
        }
    }
}
