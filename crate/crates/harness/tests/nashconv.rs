use onuw_core::{GameLog, OutcomeRules};
use onuw_equilibrium::three_player::{ROBBER_NIGHT, P3_VOTE_NS};
use onuw_equilibrium::{build_tree_no_discussion, no_discussion_equilibrium, BeliefTriple, StrategyProfile3P};
use onuw_harness::{
    estimate_nash_conv, observed_play, run_experiment, smoothed, ExperimentConfig, Resources, Setting, TreeVariant,
};

const STD: OutcomeRules = OutcomeRules::Standard;

fn games(profile: StrategyProfile3P, n: u32, seed: u64) -> Vec<GameLog> {
    let mut cfg = ExperimentConfig::profile(profile);
    cfg.repeats = n;
    cfg.seed = seed;
    run_experiment(&cfg, &Resources::offline()).unwrap()
}

fn exact(profile: StrategyProfile3P) -> f64 {
    let t = build_tree_no_discussion(STD);
    t.nash_conv(&profile.behavior(&t).unwrap())
}

#[test]
fn equilibrium_play_scores_near_zero() {
    let prof = no_discussion_equilibrium(0.5).0;
    assert!(exact(prof).abs() <= 1e-12);
    let est = estimate_nash_conv(&games(prof, 500, 1), TreeVariant::NoDiscussion, STD).unwrap();
    assert_eq!(est.logs_used, 500);
    assert!(est.value <= 0.1, "{}", est.value);
    assert!(!est.low_confidence);
    // The Robber always switches, so the no-switch vote is never observed.
    assert_eq!(est.unvisited, vec![P3_VOTE_NS.to_string()]);
}

#[test]
fn never_switch_profile_scores_near_two() {
    let prof = StrategyProfile3P::new(0.0, 1.0, 0.0, 0.0);
    assert_eq!(exact(prof), 2.0);
    let est = estimate_nash_conv(&games(prof, 500, 2), TreeVariant::NoDiscussion, STD).unwrap();
    assert!((est.value - 2.0).abs() <= 0.2, "{}", est.value);
}

#[test]
fn single_log_is_smoothed_and_low_confidence() {
    let logs = games(no_discussion_equilibrium(0.5).0, 1, 3);
    let est = estimate_nash_conv(&logs, TreeVariant::NoDiscussion, STD).unwrap();
    assert!(est.value.is_finite());
    assert!(est.low_confidence);
    let night = est.infosets.iter().find(|s| s.label == ROBBER_NIGHT).unwrap();
    assert_eq!(night.visits(), 1);
    assert!(night.probs.iter().all(|&p| p > 0.0));
    assert_eq!(est.unvisited.len(), 2);
}

#[test]
fn smoothing_is_add_one() {
    assert_eq!(smoothed(&[0, 0]), vec![0.5, 0.5]);
    assert_eq!(smoothed(&[3, 1]), vec![4.0 / 6.0, 2.0 / 6.0]);
    assert_eq!(smoothed(&[0, 7, 0]), vec![0.1, 0.8, 0.1]);
}

#[test]
fn estimate_matches_hand_counted_profile() {
    let logs = games(StrategyProfile3P::new(0.25, 0.4, 0.3, 0.6), 200, 4);
    let plays: Vec<_> = logs.iter().map(|l| observed_play(l).unwrap()).collect();
    let est = estimate_nash_conv(&logs, TreeVariant::NoDiscussion, STD).unwrap();
    // Night frequencies counted independently.
    let mut night = [0u64; 3];
    for p in &plays {
        night[p.night.index()] += 1;
    }
    let s = est.infosets.iter().find(|s| s.label == ROBBER_NIGHT).unwrap();
    assert_eq!(s.counts, night.to_vec());
    let t = build_tree_no_discussion(STD);
    let profile = onuw_equilibrium::BehaviorProfile(est.infosets.iter().map(|s| s.probs.clone()).collect());
    assert!((t.nash_conv(&profile) - est.value).abs() < 1e-12);
}

#[test]
fn error_shrinks_as_logs_grow() {
    let prof = no_discussion_equilibrium(0.5).0;
    let all = games(prof, 2000, 5);
    let err: Vec<f64> = [100, 500, 2000]
        .iter()
        .map(|&n| estimate_nash_conv(&all[..n], TreeVariant::NoDiscussion, STD).unwrap().value.abs())
        .collect();
    assert!(err[0] > err[1] && err[1] > err[2], "{err:?}");
    let prof = StrategyProfile3P::new(0.0, 1.0, 0.0, 0.0);
    let all = games(prof, 2000, 6);
    let err: Vec<f64> = [100, 500, 2000]
        .iter()
        .map(|&n| (estimate_nash_conv(&all[..n], TreeVariant::NoDiscussion, STD).unwrap().value - 2.0).abs())
        .collect();
    assert!(err[0] > err[1] && err[1] > err[2], "{err:?}");
}

#[test]
fn discussion_tree_variant() {
    let logs = games(StrategyProfile3P::new(0.0, 0.5, 0.5, 0.5), 300, 7);
    let third = 1.0 / 3.0;
    let bt = BeliefTriple::new(third, third, 1.0 - 2.0 * third).unwrap();
    let est = estimate_nash_conv(&logs, TreeVariant::WithDiscussion(bt), OutcomeRules::NoDeathDraw).unwrap();
    assert!(est.value.is_finite() && est.value >= 0.0);
    assert!(est.infosets.iter().all(|s| s.label != ROBBER_NIGHT));
}

#[test]
fn other_logs_are_skipped() {
    let five = onuw_harness::run_match(&ExperimentConfig::scripted(Setting::FiveEasy), &Resources::offline(), 0).unwrap();
    assert!(observed_play(&five).is_err());
    let mut logs = games(no_discussion_equilibrium(0.5).0, 40, 8);
    logs.push(five);
    let est = estimate_nash_conv(&logs, TreeVariant::NoDiscussion, STD).unwrap();
    assert_eq!((est.logs_used, est.logs_skipped), (40, 1));
}

#[test]
fn scripted_three_player_games_are_usable() {
    let logs = run_experiment(
        &ExperimentConfig { repeats: 5, ..ExperimentConfig::scripted(Setting::ThreePlayer) },
        &Resources::offline(),
    )
    .unwrap();
    assert!(logs.iter().all(|l| observed_play(l).is_ok()));
}
