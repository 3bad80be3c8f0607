//! Drives one match through Night, the discussion rounds and the vote.

use onuw_agents::{Agent, AgentContext, AgentError};
use onuw_core::{GameLog, GameState, PlayerId, Speech};

use crate::config::{ExperimentConfig, Resources};
use crate::error::HarnessError;
use crate::profile_agent::ProfileAgent;
use crate::settings::derive_seed;

/// Seed stream offsets, so seat agents, decision contexts and deals never share a stream.
const AGENT_STREAM: u64 = 100;
const CONTEXT_STREAM: u64 = 200;

/// Plays `state` to the end with one agent per seat. An agent or rules failure stops
/// the match; the partial log is returned with `valid = false` and an `aborted:` flag.
pub fn play_game(mut state: GameState, agents: &mut [Box<dyn Agent>], seed: u64) -> GameLog {
    let mut flags = Vec::new();
    let result = drive(&mut state, agents, seed, &mut flags);
    let mut log = GameLog::from_state(&state);
    log.flags = flags;
    if let Err(e) = result {
        log.valid = false;
        log.flags.push(format!("aborted: {e}"));
    }
    log
}

fn drive(
    state: &mut GameState,
    agents: &mut [Box<dyn Agent>],
    seed: u64,
    flags: &mut Vec<String>,
) -> Result<(), HarnessError> {
    let n = state.player_count();
    if agents.len() != n {
        return Err(HarnessError::Config(format!("{} agents for {n} seats", agents.len())));
    }
    let ctx = |state: &GameState, p: PlayerId| {
        AgentContext::from_state(state, p, derive_seed(seed, CONTEXT_STREAM + p.0 as u64))
    };
    let collect = |p: PlayerId, agent: &mut Box<dyn Agent>, flags: &mut Vec<String>| {
        flags.extend(agent.take_flags().into_iter().map(|f| format!("{p}: {f}")));
    };

    let mut night = std::collections::BTreeMap::new();
    for p in PlayerId::all(n) {
        if state.acts_at_night(p) {
            let a = &mut agents[p.index()];
            let action = a.decide_night(&ctx(state, p));
            collect(p, a, flags);
            night.insert(p, action?);
        }
    }
    state.resolve_night(&night)?;

    while let Some((round, p)) = state.next_speaker() {
        let c = ctx(state, p);
        let a = &mut agents[p.index()];
        let plan = (|| -> Result<_, AgentError> {
            let report = a.model_belief(&c)?;
            let tactic = a.select_tactic(&c, &report)?;
            let plan = a.decide_speech(&c, &report, tactic)?;
            Ok((plan, report))
        })();
        collect(p, a, flags);
        let (plan, report) = plan?;
        state.record_speech(Speech {
            round,
            player: p,
            tactic: plan.tactic,
            text: plan.text,
            claims: plan.claims,
            belief: Some(report),
        })?;
    }

    let mut votes = Vec::with_capacity(n);
    for p in PlayerId::all(n) {
        let c = ctx(state, p);
        let a = &mut agents[p.index()];
        let v = a.model_belief(&c).and_then(|r| a.decide_vote(&c, &r));
        collect(p, a, flags);
        votes.push(v?);
    }
    state.cast_votes(&votes)?;
    Ok(())
}

/// Builds the seat agents of `cfg` for the match with this seed.
pub fn build_agents(
    cfg: &ExperimentConfig,
    res: &Resources,
    seed: u64,
) -> Result<Vec<Box<dyn Agent>>, HarnessError> {
    let n = cfg.setting.player_count();
    let seat_seed = |i: usize| derive_seed(seed, AGENT_STREAM + i as u64);
    if let Some(profile) = cfg.profile {
        return Ok((0..n)
            .map(|i| Box::new(ProfileAgent::new(profile, seat_seed(i))) as Box<dyn Agent>)
            .collect());
    }
    let preset = if cfg.pin_preset_night { cfg.setting.preset_night() } else { None };
    cfg.seats
        .iter()
        .enumerate()
        .map(|(i, seat)| {
            let mut seat = seat.clone();
            // Every seat gets the whole preset so scripted beliefs share one night table.
            for (p, a) in preset.iter().flatten() {
                seat.night_table.pinned.entry(*p).or_insert(*a);
            }
            Ok(seat.build(seat_seed(i), res.gateway.clone(), res.prompts.clone(), res.q.clone())?)
        })
        .collect()
}

/// One match of `cfg` with this seed. Only configuration errors are returned as `Err`;
/// failures during play give an invalid log.
pub fn run_match(cfg: &ExperimentConfig, res: &Resources, seed: u64) -> Result<GameLog, HarnessError> {
    cfg.validate()?;
    let state = cfg.setting.new_game(seed, cfg.rules)?;
    let mut agents = build_agents(cfg, res, seed)?;
    let mut log = play_game(state, &mut agents, seed);
    log.meta.insert("setting".into(), cfg.setting.name().into());
    log.meta.insert("seed".into(), seed.to_string());
    log.meta.insert("deal".into(), log.initial.to_string());
    let kinds: Vec<String> = agents.iter().map(|a| format!("{:?}", a.kind())).collect();
    log.meta.insert("seats".into(), kinds.join(","));
    Ok(log)
}
