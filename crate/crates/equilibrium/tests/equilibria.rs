use onuw_core::OutcomeRules;
use onuw_equilibrium::three_player::{terminal_utilities, NIGHT_CHOICES, P1_VOTE, P2_VOTE};
use onuw_equilibrium::*;
use proptest::prelude::*;

const DRAW: OutcomeRules = OutcomeRules::NoDeathDraw;
const STD: OutcomeRules = OutcomeRules::Standard;

/// Independent enumeration of the three-player game. Seats 0,1 start as Werewolves, seat 2
/// as Robber. `night` = (no switch, switch 0, switch 1) probabilities.
fn oracle(night: [f64; 3], q1: f64, q2: f64, p: f64, s1v: f64, s2v: f64, draw: bool) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (n, pn) in night.iter().enumerate() {
        // wolf[i]: seat i ends as Werewolf.
        let wolf = match n {
            0 => [true, true, false],
            1 => [false, true, true],
            _ => [true, false, true],
        };
        let p3_votes_0 = [p, s1v, s2v][n];
        for (v0, pv0) in [(1usize, 1.0 - q1), (2, q1)] {
            for (v1, pv1) in [(0usize, 1.0 - q2), (2, q2)] {
                for (v2, pv2) in [(0usize, p3_votes_0), (1, 1.0 - p3_votes_0)] {
                    let w = pn * pv0 * pv1 * pv2;
                    if w == 0.0 {
                        continue;
                    }
                    let mut cnt = [0; 3];
                    cnt[v0] += 1;
                    cnt[v1] += 1;
                    cnt[v2] += 1;
                    let max = *cnt.iter().max().unwrap();
                    let dead: Vec<usize> = if max >= 2 { (0..3).filter(|&i| cnt[i] == max).collect() } else { vec![] };
                    let wolf_dead = dead.iter().any(|&d| wolf[d]);
                    for i in 0..3 {
                        let u = if wolf_dead {
                            if wolf[i] { -1.0 } else { 1.0 }
                        } else if dead.is_empty() && draw {
                            0.0
                        } else if wolf[i] {
                            1.0
                        } else {
                            -1.0
                        };
                        out[i] += w * u;
                    }
                }
            }
        }
    }
    out
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn eu(tree: &TreeGame, prof: &StrategyProfile3P) -> Vec<f64> {
    tree.expected_utilities(&prof.behavior(tree).unwrap()).unwrap()
}

#[test]
fn leaf_utilities_are_unit_valued() {
    for rules in [STD, DRAW] {
        let t = build_tree_no_discussion(rules);
        assert_eq!(t.terminal_utilities().count(), 24);
        for u in t.terminal_utilities() {
            assert!(u.iter().all(|x| [-1.0, 0.0, 1.0].contains(x)));
        }
        assert!(t.has_perfect_recall());
    }
    // Nobody dies: a draw only under the draw convention.
    assert_eq!(terminal_utilities(NIGHT_CHOICES[0], [0, 1, 0], STD), vec![1.0, 1.0, -1.0]);
    assert_eq!(terminal_utilities(NIGHT_CHOICES[0], [0, 1, 0], DRAW), vec![0.0, 0.0, 0.0]);
}

#[test]
fn infoset_sizes_match_belief_vectors() {
    let t = build_tree_no_discussion(STD);
    let size = |l: &str| t.infosets[t.infoset_by_label(l).unwrap()].nodes.len();
    assert_eq!(size(P1_VOTE), 3);
    assert_eq!(size(P2_VOTE), 6);
    for n in NIGHT_CHOICES {
        assert_eq!(size(n.vote_infoset()), 4);
    }
}

#[test]
fn no_discussion_examples() {
    for rules in [STD, DRAW] {
        let t = build_tree_no_discussion(rules);
        let (prof, _) = no_discussion_equilibrium(0.3);
        assert!(close(&eu(&t, &prof), &[0.0, 0.0, 1.0], 0.0));
        for p in [0.0, 0.4, 1.0] {
            assert!(close(&eu(&t, &StrategyProfile3P::new(0.0, p, 0.0, 0.0)), &[-1.0, -1.0, 1.0], 1e-15));
        }
    }
    let t = build_tree_no_discussion(DRAW);
    assert!(close(&eu(&t, &StrategyProfile3P::new(0.0, 0.5, 1.0, 1.0))[2..], &[-1.0], 1e-15));
    // (1)(1/4 + 1/2 - 1) = -1/4
    assert!((eu(&t, &StrategyProfile3P::new(0.0, 0.5, 0.5, 0.5))[0] + 0.25).abs() < 1e-15);
    for q in [0.0, 0.2, 0.7, 1.0] {
        let u = eu(&t, &StrategyProfile3P::new(0.5, 0.3, q, q));
        assert!(u[0].abs() < 1e-15 && u[1].abs() < 1e-15);
    }
}

#[test]
fn with_discussion_examples() {
    let third = 1.0 / 3.0;
    let bt = BeliefTriple::new(third, third, 1.0 - 2.0 * third).unwrap();
    let (prof, _) = discussion_equilibrium(bt).unwrap();
    assert!((prof.q1 - 0.5).abs() < 1e-15 && (prof.p - 0.5).abs() < 1e-15);
    let t = build_tree_with_discussion(bt, DRAW).unwrap();
    assert!(close(&eu(&t, &prof), &[-1.0 / 12.0, -1.0 / 12.0, 0.25], 1e-12));

    let bt = BeliefTriple::new(0.5, 0.25, 0.25).unwrap();
    let (prof, _) = discussion_equilibrium(bt).unwrap();
    assert_eq!((prof.q1, prof.p), (0.0, 0.5));
    let t = build_tree_with_discussion(bt, DRAW).unwrap();
    assert!(close(&eu(&t, &prof), &[-0.5, -0.5, 1.0], 1e-12));

    let bt = BeliefTriple::new(1.0, 0.0, 0.0).unwrap();
    assert!(matches!(discussion_equilibrium(bt), Err(EquilibriumError::Region { constraint: Constraint::AlphaAtMostHalf, .. })));
    assert!(BeliefTriple::new(0.5, 0.5, 0.5).is_err());
}

#[test]
fn best_response_gain_two() {
    let t = build_tree_no_discussion(STD);
    let prof = StrategyProfile3P::new(0.0, 1.0, 0.0, 0.0);
    let b = prof.behavior(&t).unwrap();
    let on = t.expected_utilities(&b).unwrap();
    let (br, v) = t.best_response(&b, 1);
    assert_eq!((on[1], v), (-1.0, 1.0));
    let p2 = t.infoset_by_label(P2_VOTE).unwrap();
    assert_eq!(br, vec![(p2, 1)], "Player 2 deviates to voting Player 3");
    assert_eq!(t.gains(&b), vec![0.0, 2.0, 0.0]);
    assert_eq!(t.nash_conv(&b), 2.0);
    // Under the draw convention the deviation only reaches a draw.
    let td = build_tree_no_discussion(DRAW);
    assert_eq!(td.nash_conv(&prof.behavior(&td).unwrap()), 1.0);
}

#[test]
fn no_discussion_certificate_both_conventions() {
    for rules in [STD, DRAW] {
        for p in [0.0, 1.0, 0.37] {
            let (u, report) = certify_no_discussion(p, rules, 1e-9).unwrap();
            assert!(report.passed(), "{rules:?} p={p}: {report:?}");
            assert!(report.nash_conv.abs() <= 1e-12);
            assert_eq!(u, vec![0.0, 0.0, 1.0]);
            // Player 3's no-switch set is never reached; its belief is not judged.
            assert_eq!(report.check(three_player::P3_VOTE_NS).unwrap().consistent, None);
        }
    }
}

#[test]
fn corrupted_belief_fails_at_player_one() {
    let (prof, mut beliefs) = no_discussion_equilibrium(0.5);
    beliefs.b1 = [1.0, 0.0, 0.0];
    let t = build_tree_no_discussion(STD);
    let b = prof.behavior(&t).unwrap();
    let r = verify_pbe(&t, &b, &beliefs.to_system(&t), 1e-9, &OffPathPolicy::Skip);
    assert!(!r.passed());
    assert_eq!(r.check(P1_VOTE).unwrap().consistent, Some(false));
    assert_eq!(r.check(P2_VOTE).unwrap().consistent, Some(true));
}

#[test]
fn strict_off_path_uses_reference() {
    let (prof, beliefs) = no_discussion_equilibrium(0.5);
    let t = build_tree_no_discussion(STD);
    let b = prof.behavior(&t).unwrap();
    let reference = beliefs.to_system(&t);
    let mut other = beliefs.clone();
    other.b3_ns = [0.0, 0.0, 0.0, 1.0];
    let loose = verify_pbe(&t, &b, &other.to_system(&t), 1e-9, &OffPathPolicy::Skip);
    assert_eq!(loose.check(three_player::P3_VOTE_NS).unwrap().consistent, None);
    let strict = verify_pbe(&t, &b, &other.to_system(&t), 1e-9, &OffPathPolicy::Require(reference));
    assert_eq!(strict.check(three_player::P3_VOTE_NS).unwrap().consistent, Some(false));
}

#[test]
fn discussion_equilibrium_gains_are_zero() {
    let third = 1.0 / 3.0;
    let bt = BeliefTriple::new(third, third, 1.0 - 2.0 * third).unwrap();
    let (prof, _) = discussion_equilibrium(bt).unwrap();
    let t = build_tree_with_discussion(bt, DRAW).unwrap();
    for g in t.gains(&prof.behavior(&t).unwrap()) {
        assert!(g.abs() <= 1e-12);
    }
}

#[test]
fn region_examples() {
    let r = region_check(&BeliefTriple::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap());
    assert!(r.passed());
    assert!((r.gamma_lower - 0.25).abs() < 1e-15 && (r.gamma_upper - 5.0 / 12.0).abs() < 1e-15);
    let r = region_check(&BeliefTriple::new(0.25, 0.375, 0.375).unwrap());
    assert!(r.passed());
    assert!((r.gamma_lower - 1.0 / 3.0).abs() < 1e-15 && (r.gamma_upper - 0.625 / 1.5).abs() < 1e-15);
    assert_eq!(region_check(&BeliefTriple::new(0.6, 0.2, 0.2).unwrap()).first_violation(), Some(Constraint::AlphaAtMostHalf));

    let bad = BeliefTriple::new(0.3, 0.5, 0.2).unwrap();
    assert_eq!(region_check(&bad).first_violation(), Some(Constraint::GammaLowerBound));
    match discussion_equilibrium(bad) {
        Err(EquilibriumError::Region { constraint, .. }) => assert_eq!(constraint, Constraint::GammaLowerBound),
        other => panic!("{other:?}"),
    }
}

#[test]
fn closed_form_examples() {
    let cases = [
        ((1.0 / 3.0, 1.0 / 3.0), -0.25, [-1.0 / 12.0, -1.0 / 12.0, 0.25]),
        ((0.5, 0.25), -1.0, [-0.5, -0.5, 1.0]),
        ((0.25, 0.375), 1.0, [0.25, 0.25, -1.0]),
    ];
    for ((a, b), d, u) in cases {
        let bt = BeliefTriple::new(a, b, 1.0 - a - b).unwrap();
        assert!((delta(a) - d).abs() < 1e-12);
        assert!(close(&closed_form_utilities(&bt).unwrap(), &u, 1e-12));
        let (row, _) = certify_discussion(bt, 1e-9).unwrap();
        assert!(row.passed(1e-9), "{row:?}");
        assert!(close(&row.traversal, &u, 1e-12));
    }
    let third = 1.0 / 3.0;
    let bt = BeliefTriple::new(third, third, 1.0 - 2.0 * third).unwrap();
    let t = build_tree_with_discussion(bt, DRAW).unwrap();
    assert!(close(&eu(&t, &StrategyProfile3P::new(0.0, 0.5, 0.5, 0.5)), &[-1.0 / 12.0, -1.0 / 12.0, 0.25], 1e-12));
}

#[test]
fn stationarity_examples() {
    for (a, b) in [(1.0 / 3.0, 1.0 / 3.0), (0.3, 0.35)] {
        let bt = BeliefTriple::new(a, b, 1.0 - a - b).unwrap();
        let (prof, _) = discussion_equilibrium(bt).unwrap();
        assert!(stationarity_check(&bt, &prof).unwrap() <= 1e-6);
        let off = StrategyProfile3P { q1: prof.q1 + 0.1, ..prof };
        assert!(stationarity_check(&bt, &off).unwrap() >= 1e-3);
    }
}

#[test]
fn grid_certificates() {
    let grid = region_grid(5, 10);
    assert_eq!(grid.len(), 50);
    for bt in grid {
        assert!(region_check(&bt).passed());
        let (row, report) = certify_discussion(bt, 1e-9).unwrap();
        assert!(row.passed(1e-9), "{row:?} {report:?}");
    }
}

fn simplex() -> impl Strategy<Value = BeliefTriple> {
    (0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let (a, b) = (lo, hi - lo);
        BeliefTriple { alpha: a, beta: b, gamma: 1.0 - a - b }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn no_discussion_traversal_matches_closed_form(s in 0.0f64..=0.5, q in 0.0f64..=1.0, p in 0.0f64..=1.0) {
        let t = build_tree_no_discussion(DRAW);
        let prof = StrategyProfile3P::new(s, p, q, q);
        let u = eu(&t, &prof);
        prop_assert!(close(&u, &no_discussion_closed_form(s, q), 1e-12));
        prop_assert!(close(&u, &oracle([1.0 - 2.0 * s, s, s], q, q, p, 1.0, 0.0, true), 1e-12));
    }

    #[test]
    fn with_discussion_traversal_matches_closed_form(
        bt in simplex(), q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, p in 0.0f64..=1.0,
    ) {
        let t = build_tree_with_discussion(bt, DRAW).unwrap();
        let u = eu(&t, &StrategyProfile3P::new(0.0, p, q1, q2));
        prop_assert!(close(&u, &with_discussion_closed_form(&bt, q1, q2, p), 1e-12));
        prop_assert!(close(&u, &oracle([bt.alpha, bt.beta, bt.gamma], q1, q2, p, 1.0, 0.0, true), 1e-12));
    }

    #[test]
    fn standard_rules_match_oracle(
        s in 0.0f64..=0.5, q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, p in 0.0f64..=1.0,
        s1v in 0.0f64..=1.0, s2v in 0.0f64..=1.0,
    ) {
        let t = build_tree_no_discussion(STD);
        let prof = StrategyProfile3P { s, p, q1, q2, s1_vote_p1: s1v, s2_vote_p1: s2v };
        prop_assert!(close(&eu(&t, &prof), &oracle([1.0 - 2.0 * s, s, s], q1, q2, p, s1v, s2v, false), 1e-12));
    }

    #[test]
    fn nash_conv_is_sum_of_nonnegative_gains(
        s in 0.0f64..=0.5, q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, p in 0.0f64..=1.0,
    ) {
        let t = build_tree_no_discussion(STD);
        let b = StrategyProfile3P::new(s, p, q1, q2).behavior(&t).unwrap();
        let gains = t.gains(&b);
        prop_assert!(gains.iter().all(|g| *g >= 0.0));
        prop_assert!((gains.iter().sum::<f64>() - t.nash_conv(&b)).abs() < 1e-15);
        let on = t.expected_utilities(&b).unwrap();
        for i in 0..3 {
            prop_assert!(t.best_response(&b, i).1 >= on[i] - 1e-15);
        }
    }

    #[test]
    fn mirror_symmetry(bt in simplex(), q in 0.0f64..=1.0, p in 0.0f64..=1.0) {
        let a = with_discussion_closed_form(&bt, q, q, p);
        let m = with_discussion_closed_form(&bt.mirrored(), q, q, 1.0 - p);
        prop_assert!((a[0] - m[1]).abs() < 1e-12 && (a[1] - m[0]).abs() < 1e-12 && (a[2] - m[2]).abs() < 1e-12);
        if region_check(&bt).passed() {
            let u = closed_form_utilities(&bt).unwrap();
            let v = closed_form_utilities(&bt.mirrored()).unwrap();
            prop_assert!((u[0] - v[1]).abs() < 1e-12 && (u[2] - v[2]).abs() < 1e-12);
        }
    }
}

#[test]
fn region_soundness_on_samples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let (x, y): (f64, f64) = (rng.gen(), rng.gen());
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let bt = BeliefTriple { alpha: lo, beta: hi - lo, gamma: 1.0 - hi };
        let ok = region_check(&bt).passed();
        match discussion_equilibrium(bt) {
            Ok((prof, _)) => {
                assert!(ok, "{bt:?}");
                assert!((0.0..=1.0).contains(&prof.p) && (0.0..=1.0).contains(&prof.q1));
            }
            Err(_) => assert!(!ok, "{bt:?}"),
        }
    }
}
