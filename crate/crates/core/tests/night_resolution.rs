use std::collections::BTreeMap;

use onuw_core::presets;
use onuw_core::{
    new_game, new_game_with_deal, GameError, GameSpec, NightActionKind, Observation, Phase,
    PlayerId, RoleCard,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(k: u8) -> PlayerId {
    PlayerId(k - 1)
}

#[test]
fn easy_setting_final_roles() {
    use RoleCard::*;
    let s = presets::easy();
    let mut g = new_game_with_deal(s.spec, s.initial).unwrap();
    g.resolve_night(&s.night).unwrap();
    assert_eq!(g.current.player_roles, vec![Robber, Werewolf, Villager, Troublemaker, Seer]);
    assert_eq!(g.phase, Phase::Day(1));
    assert_eq!(g.private_observation(p(3)), Observation::SawPlayer { target: p(4), role: Robber });
    assert_eq!(g.private_observation(p(4)), Observation::NewRole(Troublemaker));
    assert_eq!(g.private_observation(p(2)), Observation::Werewolves(vec![]));
}

#[test]
fn hard_setting_final_roles() {
    use RoleCard::*;
    let s = presets::hard();
    let mut g = new_game_with_deal(s.spec, s.initial).unwrap();
    g.resolve_night(&s.night).unwrap();
    assert_eq!(g.current.player_roles, vec![Werewolf, Seer, Insomniac, Robber, Troublemaker]);
    assert_eq!(g.private_observation(p(2)), Observation::FinalRole(Seer));
    assert_eq!(g.private_observation(p(1)), Observation::NewRole(Werewolf));
}

#[test]
fn robbed_troublemaker_still_swaps() {
    use RoleCard::*;
    // Robber takes the Troublemaker card first; the original Troublemaker acts later.
    let s = presets::easy();
    let mut g = new_game_with_deal(s.spec, s.initial).unwrap();
    g.resolve_night(&s.night).unwrap();
    let order: Vec<_> = g.night_records().map(|r| r.actor).collect();
    assert_eq!(order, vec![p(2), p(3), p(4), p(1)]);
    assert_eq!(g.current.player_roles[0], Robber);
}

#[test]
fn legal_action_sets() {
    let s = presets::easy();
    let g = new_game_with_deal(s.spec, s.initial).unwrap();
    assert_eq!(g.legal_night_actions(p(5)).unwrap(), vec![NightActionKind::NoAction]);
    assert_eq!(g.legal_night_actions(p(4)).unwrap().len(), 5);
    assert_eq!(g.legal_night_actions(p(3)).unwrap().len(), 7);
    assert_eq!(g.legal_night_actions(p(1)).unwrap().len(), 7);
}

#[test]
fn illegal_actions_rejected() {
    let s = presets::easy();
    let mut g = new_game_with_deal(s.spec, s.initial).unwrap();
    let mut night = s.night.clone();
    night.insert(p(4), NightActionKind::RobberSwitch(p(4)));
    match g.resolve_night(&night) {
        Err(GameError::IllegalAction { actor, .. }) => assert_eq!(actor, p(4)),
        other => panic!("{other:?}"),
    }
    let mut night = s.night.clone();
    night.insert(p(5), NightActionKind::InsomniacPeek);
    assert!(g.resolve_night(&night).is_err());
    let mut night = s.night;
    night.insert(p(1), NightActionKind::TroublemakerSwap(p(1), p(3)));
    assert!(g.resolve_night(&night).is_err());
    assert_eq!(g.phase, Phase::Night);
}

#[test]
fn phase_errors() {
    let s = presets::easy();
    let mut g = new_game_with_deal(s.spec, s.initial).unwrap();
    g.resolve_night(&s.night).unwrap();
    assert!(matches!(g.legal_night_actions(p(1)), Err(GameError::Phase { .. })));
    assert!(matches!(g.resolve_night(&s.night), Err(GameError::Phase { .. })));
}

fn random_actions(g: &onuw_core::GameState, rng: &mut ChaCha8Rng, passive: bool) -> BTreeMap<PlayerId, NightActionKind> {
    g.players()
        .map(|pl| {
            let mut legal = g.legal_night_actions(pl).unwrap();
            if passive {
                legal.retain(|a| !a.moves_cards());
            }
            (pl, legal[rng.gen_range(0..legal.len())])
        })
        .collect()
}

proptest! {
    #[test]
    fn multiset_is_conserved(seed in any::<u64>(), n in 3usize..=5, act_seed in any::<u64>()) {
        let mut g = new_game(GameSpec::standard(n, seed).unwrap()).unwrap();
        prop_assert!(g.initial.conserves(&g.spec));
        let mut rng = ChaCha8Rng::seed_from_u64(act_seed);
        let actions = random_actions(&g, &mut rng, false);
        g.resolve_night(&actions).unwrap();
        prop_assert!(g.current.conserves(&g.spec));
        prop_assert_eq!(g.current.pool, g.initial.pool);
    }

    #[test]
    fn passive_nights_change_nothing(seed in any::<u64>(), n in 3usize..=5, act_seed in any::<u64>()) {
        let mut g = new_game(GameSpec::standard(n, seed).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(act_seed);
        let actions = random_actions(&g, &mut rng, true);
        g.resolve_night(&actions).unwrap();
        prop_assert_eq!(&g.current, &g.initial);
    }

    #[test]
    fn same_seed_same_deal(seed in any::<u64>()) {
        let a = new_game(GameSpec::five_player(seed)).unwrap();
        let b = new_game(GameSpec::five_player(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
