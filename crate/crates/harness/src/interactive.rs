//! A terminal seat for a human player.

use std::io::{BufRead, Write};

use onuw_agents::{Agent, AgentContext, AgentError, AgentKind, SpeechPlan};
use onuw_core::night::legal_actions_for;
use onuw_core::{BeliefReport, Claim, ClaimTime, GameLog, NightActionKind, PlayerId, Tactic, ALL_TACTICS};
use onuw_llm::extract_role_mentions;

use crate::config::{ExperimentConfig, Resources};
use crate::error::HarnessError;
use crate::runner::{build_agents, play_game};

/// Reads decisions from `input` and writes prompts to `output`. Typing `quit` (or
/// closing the input) ends the match.
pub struct HumanAgent {
    input: Box<dyn BufRead + Send>,
    output: Box<dyn Write + Send>,
    shown: usize,
}

fn quit() -> AgentError {
    AgentError::Config("the human player left the game".into())
}

impl HumanAgent {
    pub fn new(input: Box<dyn BufRead + Send>, output: Box<dyn Write + Send>) -> Self {
        HumanAgent { input, output, shown: 0 }
    }

    fn say(&mut self, text: &str) {
        let _ = writeln!(self.output, "{text}");
        let _ = self.output.flush();
    }

    fn ask(&mut self, prompt: &str) -> Result<String, AgentError> {
        let _ = write!(self.output, "{prompt} ");
        let _ = self.output.flush();
        let mut line = String::new();
        let n = self.input.read_line(&mut line).map_err(|e| AgentError::Config(e.to_string()))?;
        let line = line.trim().to_string();
        if n == 0 || line.eq_ignore_ascii_case("quit") {
            return Err(quit());
        }
        Ok(line)
    }

    /// Asks until `parse` accepts the answer.
    fn ask_until<T>(
        &mut self,
        prompt: &str,
        mut parse: impl FnMut(&str) -> Result<T, String>,
    ) -> Result<T, AgentError> {
        loop {
            let answer = self.ask(prompt)?;
            match parse(&answer) {
                Ok(v) => return Ok(v),
                Err(why) => self.say(&format!("Not allowed: {why}. Try again.")),
            }
        }
    }

    fn show_news(&mut self, ctx: &AgentContext) {
        let new: Vec<String> =
            ctx.history[self.shown.min(ctx.history.len())..].iter().map(|s| format!("  {}: {}", s.player, s.text)).collect();
        self.shown = ctx.history.len();
        for line in new {
            self.say(&line);
        }
    }
}

fn pick_index(answer: &str, len: usize) -> Result<usize, String> {
    match answer.parse::<usize>() {
        Ok(i) if (1..=len).contains(&i) => Ok(i - 1),
        _ => Err(format!("enter a number from 1 to {len}")),
    }
}

impl Agent for HumanAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Scripted
    }

    fn model_belief(&mut self, ctx: &AgentContext) -> Result<BeliefReport, AgentError> {
        Ok(BeliefReport::uniform(ctx.player_count(), ctx.initial_role))
    }

    fn select_tactic(&mut self, ctx: &AgentContext, _: &BeliefReport) -> Result<Option<Tactic>, AgentError> {
        self.show_news(ctx);
        self.say(&format!("{} round {}: pick a tactic for your speech.", ctx.player, ctx.round()));
        for (i, t) in ALL_TACTICS.iter().enumerate() {
            self.say(&format!("  {}. {}", i + 1, t.label()));
        }
        self.ask_until("Tactic number (blank for none):", |a| {
            if a.is_empty() {
                return Ok(None);
            }
            pick_index(a, ALL_TACTICS.len()).map(|i| Some(ALL_TACTICS[i]))
        })
    }

    fn decide_night(&mut self, ctx: &AgentContext) -> Result<NightActionKind, AgentError> {
        self.say(&format!("You are {}. {}", ctx.player, ctx.private_notes()));
        let legal = legal_actions_for(ctx.initial_role, ctx.player, ctx.player_count(), &ctx.spec.night_order);
        if legal.len() == 1 {
            return Ok(legal[0]);
        }
        for (i, a) in legal.iter().enumerate() {
            self.say(&format!("  {}. {a}", i + 1));
        }
        let i = self.ask_until("Night action number:", |a| pick_index(a, legal.len()))?;
        Ok(legal[i])
    }

    fn decide_speech(
        &mut self,
        ctx: &AgentContext,
        _: &BeliefReport,
        tactic: Option<Tactic>,
    ) -> Result<SpeechPlan, AgentError> {
        let text = self.ask_until("Your speech:", |a| {
            if a.is_empty() {
                Err("say something".into())
            } else {
                Ok(a.to_string())
            }
        })?;
        let honest = tactic.map(Tactic::is_honest).unwrap_or(true);
        let claims = extract_role_mentions(&text, ctx.player, ctx.player_count())
            .into_iter()
            .map(|(subject, role)| Claim { subject, role, negated: false, time: ClaimTime::Final, honest })
            .collect();
        Ok(SpeechPlan { tactic, claims, text })
    }

    fn decide_vote(&mut self, ctx: &AgentContext, _: &BeliefReport) -> Result<PlayerId, AgentError> {
        self.show_news(ctx);
        let n = ctx.player_count();
        let me = ctx.player;
        self.ask_until(&format!("Vote for a player (1-{n}):"), |a| match a.parse::<usize>() {
            Ok(k) if k == me.index() + 1 => Err("you cannot vote for yourself".into()),
            Ok(k) if (1..=n).contains(&k) => Ok(PlayerId(k as u8 - 1)),
            _ => Err(format!("enter a player number from 1 to {n}")),
        })
    }

    fn take_flags(&mut self) -> Vec<String> {
        Vec::new()
    }
}

/// Plays one match of `cfg` with `seat` taken by a human on `input`/`output`. Leaving
/// early gives a partial log with `valid = false`.
pub fn interactive_seat(
    cfg: &ExperimentConfig,
    res: &Resources,
    seat: PlayerId,
    seed: u64,
    input: Box<dyn BufRead + Send>,
    output: Box<dyn Write + Send>,
) -> Result<GameLog, HarnessError> {
    cfg.validate()?;
    if seat.index() >= cfg.setting.player_count() {
        return Err(HarnessError::Config(format!("{seat} is not a seat of {}", cfg.setting)));
    }
    let state = cfg.setting.new_game(seed, cfg.rules)?;
    let mut agents = build_agents(cfg, res, seed)?;
    agents[seat.index()] = Box::new(HumanAgent::new(input, output));
    let mut log = play_game(state, &mut agents, seed);
    log.meta.insert("setting".into(), cfg.setting.name().into());
    log.meta.insert("seed".into(), seed.to_string());
    log.meta.insert("human_seat".into(), seat.to_string());
    Ok(log)
}
