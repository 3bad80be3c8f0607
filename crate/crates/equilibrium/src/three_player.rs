//! The two-Werewolf, one-Robber game: trees with and without discussion, the
//! parameterized strategy family, closed forms and equilibrium certificates.

use std::collections::BTreeMap;
use std::fmt;

use onuw_core::night::resolve_actions;
use onuw_core::{
    determine_outcome_with, tally_votes, utility, Assignment, NightActionKind, OutcomeRules,
    PlayerId, RoleCard, DEFAULT_NIGHT_ORDER,
};
use serde::{Deserialize, Serialize};

use crate::error::EquilibriumError;
use crate::tree::{
    verify_pbe, BehaviorProfile, BeliefSystem, NodeId, OffPathPolicy, PbeReport, TreeBuilder,
    TreeGame,
};

pub const ROBBER_NIGHT: &str = "robber-night";
pub const P1_VOTE: &str = "p1-vote";
pub const P2_VOTE: &str = "p2-vote";
pub const P3_VOTE_NS: &str = "p3-vote-ns";
pub const P3_VOTE_S1: &str = "p3-vote-s1";
pub const P3_VOTE_S2: &str = "p3-vote-s2";
const P3_VOTE: [&str; 3] = [P3_VOTE_NS, P3_VOTE_S1, P3_VOTE_S2];

/// The Robber's night options, in tree order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NightChoice {
    NoSwitch,
    SwitchP1,
    SwitchP2,
}

pub const NIGHT_CHOICES: [NightChoice; 3] =
    [NightChoice::NoSwitch, NightChoice::SwitchP1, NightChoice::SwitchP2];

impl NightChoice {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn action(self) -> NightActionKind {
        match self {
            NightChoice::NoSwitch => NightActionKind::RobberPass,
            NightChoice::SwitchP1 => NightActionKind::RobberSwitch(PlayerId(0)),
            NightChoice::SwitchP2 => NightActionKind::RobberSwitch(PlayerId(1)),
        }
    }

    pub fn from_action(a: NightActionKind) -> Option<NightChoice> {
        match a {
            NightActionKind::RobberPass => Some(NightChoice::NoSwitch),
            NightActionKind::RobberSwitch(PlayerId(0)) => Some(NightChoice::SwitchP1),
            NightActionKind::RobberSwitch(PlayerId(1)) => Some(NightChoice::SwitchP2),
            _ => None,
        }
    }

    /// Label of Player 3's voting information set after this choice.
    pub fn vote_infoset(self) -> &'static str {
        P3_VOTE[self.index()]
    }
}

/// Vote options per seat, in tree order. Index 1 of the Werewolves' sets is "vote Player 3";
/// index 0 of Player 3's sets is "vote Player 1".
pub fn vote_options(seat: usize) -> [PlayerId; 2] {
    match seat {
        0 => [PlayerId(1), PlayerId(2)],
        1 => [PlayerId(0), PlayerId(2)],
        2 => [PlayerId(0), PlayerId(1)],
        _ => panic!("three-player game has seats 0..3"),
    }
}

/// Seats 1 and 2 hold Werewolves, seat 3 the Robber; the pool is three Villagers.
pub fn initial_deal() -> Assignment {
    use RoleCard::*;
    Assignment::new(vec![Werewolf, Werewolf, Robber], [Villager; 3])
}

/// Utilities of a terminal history, computed with the rules engine.
pub fn terminal_utilities(night: NightChoice, votes: [usize; 3], rules: OutcomeRules) -> Vec<f64> {
    let initial = initial_deal();
    let actions = BTreeMap::from([
        (PlayerId(0), NightActionKind::WerewolfPeek),
        (PlayerId(1), NightActionKind::WerewolfPeek),
        (PlayerId(2), night.action()),
    ]);
    let (current, _) =
        resolve_actions(&initial, &DEFAULT_NIGHT_ORDER, &actions).expect("legal night");
    let targets: Vec<PlayerId> = (0..3).map(|s| vote_options(s)[votes[s]]).collect();
    let tally = tally_votes(&targets).expect("no self votes");
    let outcome = determine_outcome_with(&current.player_roles, &tally.deaths, rules);
    current.player_roles.iter().map(|r| utility(*r, outcome) as f64).collect()
}

struct Sets {
    p1: usize,
    p2: usize,
    p3: [usize; 3],
}

fn add_sets(b: &mut TreeBuilder) -> Sets {
    let p1 = b.infoset(0, P1_VOTE, &["vote P2", "vote P3"]);
    let p2 = b.infoset(1, P2_VOTE, &["vote P1", "vote P3"]);
    let p3 = P3_VOTE.map(|l| b.infoset(2, l, &["vote P1", "vote P2"]));
    Sets { p1, p2, p3 }
}

/// Builds the three voting subtrees (one per night choice) and returns their roots.
fn voting_subtrees(b: &mut TreeBuilder, sets: &Sets, rules: OutcomeRules) -> Vec<NodeId> {
    // Nodes are created level by level so that each set lists its nodes left to right.
    let p1_nodes: Vec<NodeId> = NIGHT_CHOICES.iter().map(|_| b.decision(sets.p1)).collect();
    let mut p2_nodes = BTreeMap::new();
    for n in NIGHT_CHOICES {
        for a1 in 0..2 {
            p2_nodes.insert((n, a1), b.decision(sets.p2));
        }
    }
    let mut p3_nodes = BTreeMap::new();
    for n in NIGHT_CHOICES {
        for a1 in 0..2 {
            for a2 in 0..2 {
                p3_nodes.insert((n, a1, a2), b.decision(sets.p3[n.index()]));
            }
        }
    }
    for n in NIGHT_CHOICES {
        for a1 in 0..2 {
            for a2 in 0..2 {
                let leaves = (0..2)
                    .map(|a3| b.terminal(terminal_utilities(n, [a1, a2, a3], rules)))
                    .collect();
                b.set_children(p3_nodes[&(n, a1, a2)], leaves);
            }
            let kids = (0..2).map(|a2| p3_nodes[&(n, a1, a2)]).collect();
            b.set_children(p2_nodes[&(n, a1)], kids);
        }
        let kids = (0..2).map(|a1| p2_nodes[&(n, a1)]).collect();
        b.set_children(p1_nodes[n.index()], kids);
    }
    p1_nodes
}

/// The game where players vote straight after the night: the Robber's night move is a
/// decision, and the Werewolves cannot tell which move was made.
pub fn build_tree_no_discussion(rules: OutcomeRules) -> TreeGame {
    let mut b = TreeBuilder::new(3);
    let night = b.infoset(2, ROBBER_NIGHT, &["no switch", "switch P1", "switch P2"]);
    let sets = add_sets(&mut b);
    let root = b.decision(night);
    let kids = voting_subtrees(&mut b, &sets, rules);
    b.set_children(root, kids);
    b.finish(root).expect("three-player tree is well formed")
}

/// The voting subgame after discussion: the night move is drawn from the Werewolves'
/// shared belief triple.
pub fn build_tree_with_discussion(
    bt: BeliefTriple,
    rules: OutcomeRules,
) -> Result<TreeGame, EquilibriumError> {
    bt.validate()?;
    let mut b = TreeBuilder::new(3);
    let sets = add_sets(&mut b);
    let root = b.chance();
    let kids = voting_subtrees(&mut b, &sets, rules);
    let probs = [bt.alpha, bt.beta, bt.gamma];
    let outcomes = NIGHT_CHOICES
        .iter()
        .zip(kids)
        .map(|(n, k)| (format!("{n:?}"), probs[n.index()], k))
        .collect();
    b.set_outcomes(root, outcomes);
    b.finish(root)
}

/// The Werewolves' shared belief about the Robber's night move.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefTriple {
    /// No switch.
    pub alpha: f64,
    /// Switched with Player 1.
    pub beta: f64,
    /// Switched with Player 2.
    pub gamma: f64,
}

impl BeliefTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, EquilibriumError> {
        let bt = BeliefTriple { alpha, beta, gamma };
        bt.validate()?;
        Ok(bt)
    }

    pub fn validate(&self) -> Result<(), EquilibriumError> {
        let v = [self.alpha, self.beta, self.gamma];
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(EquilibriumError::InvalidBelief(format!("negative or non-finite entry in {v:?}")));
        }
        if (v.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(EquilibriumError::InvalidBelief(format!("{v:?} does not sum to 1")));
        }
        Ok(())
    }

    /// The same belief with the two switch targets exchanged.
    pub fn mirrored(&self) -> Self {
        BeliefTriple { alpha: self.alpha, beta: self.gamma, gamma: self.beta }
    }
}

/// The strategy family used in the analysis: Robber switches with each Werewolf with
/// probability `s`; Werewolf i votes Player 3 with probability `qi`; the Robber votes
/// Player 1 with probability `p` after not switching.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile3P {
    pub s: f64,
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    /// Probability of voting Player 1 after switching with Player 1.
    pub s1_vote_p1: f64,
    /// Probability of voting Player 1 after switching with Player 2.
    pub s2_vote_p1: f64,
}

impl StrategyProfile3P {
    /// Post-switch votes fixed at "vote the player you switched with".
    pub fn new(s: f64, p: f64, q1: f64, q2: f64) -> Self {
        StrategyProfile3P { s, p, q1, q2, s1_vote_p1: 1.0, s2_vote_p1: 0.0 }
    }

    pub fn validate(&self) -> Result<(), EquilibriumError> {
        let probs = [self.p, self.q1, self.q2, self.s1_vote_p1, self.s2_vote_p1];
        if probs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(EquilibriumError::InvalidProfile(format!("probability outside [0,1] in {self:?}")));
        }
        if !(0.0..=0.5).contains(&self.s) {
            return Err(EquilibriumError::InvalidProfile(format!("s = {} outside [0, 1/2]", self.s)));
        }
        Ok(())
    }

    /// Behavioral profile on either three-player tree, without range checks.
    pub fn behavior_unchecked(&self, tree: &TreeGame) -> BehaviorProfile {
        let dist = |label: &str| -> Vec<f64> {
            match label {
                ROBBER_NIGHT => vec![1.0 - 2.0 * self.s, self.s, self.s],
                P1_VOTE => vec![1.0 - self.q1, self.q1],
                P2_VOTE => vec![1.0 - self.q2, self.q2],
                P3_VOTE_NS => vec![self.p, 1.0 - self.p],
                P3_VOTE_S1 => vec![self.s1_vote_p1, 1.0 - self.s1_vote_p1],
                P3_VOTE_S2 => vec![self.s2_vote_p1, 1.0 - self.s2_vote_p1],
                other => panic!("unknown information set `{other}`"),
            }
        };
        BehaviorProfile(tree.infosets.iter().map(|s| dist(&s.label)).collect())
    }

    pub fn behavior(&self, tree: &TreeGame) -> Result<BehaviorProfile, EquilibriumError> {
        self.validate()?;
        Ok(self.behavior_unchecked(tree))
    }
}

/// Beliefs at every voting information set, node order left to right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefSystem3P {
    pub b1: [f64; 3],
    pub b2: [f64; 6],
    pub b3_ns: [f64; 4],
    pub b3_s1: [f64; 4],
    pub b3_s2: [f64; 4],
}

impl BeliefSystem3P {
    pub fn to_system(&self, tree: &TreeGame) -> BeliefSystem {
        BeliefSystem(
            tree.infosets
                .iter()
                .map(|s| match s.label.as_str() {
                    ROBBER_NIGHT => vec![1.0],
                    P1_VOTE => self.b1.to_vec(),
                    P2_VOTE => self.b2.to_vec(),
                    P3_VOTE_NS => self.b3_ns.to_vec(),
                    P3_VOTE_S1 => self.b3_s1.to_vec(),
                    P3_VOTE_S2 => self.b3_s2.to_vec(),
                    other => panic!("unknown information set `{other}`"),
                })
                .collect(),
        )
    }

    fn werewolf_votes(q: f64) -> [f64; 4] {
        [(1.0 - q) * (1.0 - q), (1.0 - q) * q, (1.0 - q) * q, q * q]
    }
}

/// The no-discussion equilibrium: switch with either Werewolf at random and vote for the
/// one switched with; Werewolves vote for each other. `p` is free.
pub fn no_discussion_equilibrium(p: f64) -> (StrategyProfile3P, BeliefSystem3P) {
    let prof = StrategyProfile3P::new(0.5, p, 0.0, 0.0);
    let beliefs = BeliefSystem3P {
        b1: [0.0, 0.5, 0.5],
        b2: [0.0, 0.0, 0.5, 0.0, 0.5, 0.0],
        b3_ns: [1.0, 0.0, 0.0, 0.0],
        b3_s1: [1.0, 0.0, 0.0, 0.0],
        b3_s2: [1.0, 0.0, 0.0, 0.0],
    };
    (prof, beliefs)
}

/// Constraints of the equilibrium region.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    SumToOne,
    AlphaAtLeastQuarter,
    AlphaAtMostHalf,
    GammaLowerBound,
    GammaUpperBound,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::SumToOne => "alpha + beta + gamma = 1",
            Constraint::AlphaAtLeastQuarter => "alpha >= 1/4",
            Constraint::AlphaAtMostHalf => "alpha <= 1/2",
            Constraint::GammaLowerBound => "gamma >= (1 - 2 alpha) / (2 - 2 alpha)",
            Constraint::GammaUpperBound => "gamma <= (2 alpha^2 - 2 alpha + 1) / (2 - 2 alpha)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionReport {
    pub gamma_lower: f64,
    pub gamma_upper: f64,
    /// Each constraint with whether it holds.
    pub constraints: Vec<(Constraint, bool)>,
}

impl RegionReport {
    pub fn passed(&self) -> bool {
        self.constraints.iter().all(|c| c.1)
    }

    pub fn first_violation(&self) -> Option<Constraint> {
        self.constraints.iter().find(|c| !c.1).map(|c| c.0)
    }
}

/// Slack for boundary points computed in floating point.
pub const REGION_EPS: f64 = 1e-12;

pub fn region_check(bt: &BeliefTriple) -> RegionReport {
    let a = bt.alpha;
    let lower = (1.0 - 2.0 * a) / (2.0 - 2.0 * a);
    let upper = (2.0 * a * a - 2.0 * a + 1.0) / (2.0 - 2.0 * a);
    let sum = (a + bt.beta + bt.gamma - 1.0).abs() <= REGION_EPS
        && [a, bt.beta, bt.gamma].iter().all(|x| *x >= 0.0);
    RegionReport {
        gamma_lower: lower,
        gamma_upper: upper,
        constraints: vec![
            (Constraint::SumToOne, sum),
            (Constraint::AlphaAtLeastQuarter, a >= 0.25 - REGION_EPS),
            (Constraint::AlphaAtMostHalf, a <= 0.5 + REGION_EPS),
            (Constraint::GammaLowerBound, bt.gamma >= lower - REGION_EPS),
            (Constraint::GammaUpperBound, bt.gamma <= upper + REGION_EPS),
        ],
    }
}

/// Werewolves' probability of voting Player 3 at the discussion equilibrium.
pub fn discussion_equilibrium_q(bt: &BeliefTriple) -> f64 {
    (bt.beta + bt.gamma - bt.alpha) / (2.0 * bt.alpha)
}

/// Robber's probability of voting Player 1 after not switching, at the same equilibrium.
pub fn discussion_equilibrium_p(bt: &BeliefTriple) -> f64 {
    let a2 = bt.alpha * bt.alpha;
    (a2 + bt.beta * bt.beta - bt.gamma * bt.gamma) / (2.0 * a2)
}

/// The discussion-game equilibrium for a belief triple. Fails when the implied `p` or `q`
/// is not a probability, naming the constraint that breaks.
pub fn discussion_equilibrium(
    bt: BeliefTriple,
) -> Result<(StrategyProfile3P, BeliefSystem3P), EquilibriumError> {
    bt.validate()?;
    let fail = |constraint, detail: String| Err(EquilibriumError::Region { constraint, detail });
    if bt.alpha <= 0.0 {
        return fail(Constraint::AlphaAtLeastQuarter, "alpha must be positive".into());
    }
    let q = discussion_equilibrium_q(&bt);
    let p = discussion_equilibrium_p(&bt);
    if q < -REGION_EPS {
        return fail(Constraint::AlphaAtMostHalf, format!("q = {q} < 0"));
    }
    if q > 1.0 + REGION_EPS {
        return fail(Constraint::AlphaAtLeastQuarter, format!("q = {q} > 1"));
    }
    if p > 1.0 + REGION_EPS {
        return fail(Constraint::GammaLowerBound, format!("p = {p} > 1"));
    }
    if p < -REGION_EPS {
        return fail(Constraint::GammaUpperBound, format!("p = {p} < 0"));
    }
    let (q, p) = (q.clamp(0.0, 1.0), p.clamp(0.0, 1.0));
    let prof = StrategyProfile3P { s: 0.0, p, q1: q, q2: q, s1_vote_p1: 1.0, s2_vote_p1: 0.0 };
    let w = BeliefSystem3P::werewolf_votes(q);
    let beliefs = BeliefSystem3P {
        b1: [bt.alpha, bt.beta, bt.gamma],
        b2: [
            bt.alpha * (1.0 - q),
            bt.alpha * q,
            bt.beta * (1.0 - q),
            bt.beta * q,
            bt.gamma * (1.0 - q),
            bt.gamma * q,
        ],
        b3_ns: w,
        b3_s1: w,
        b3_s2: w,
    };
    Ok((prof, beliefs))
}

pub fn delta(alpha: f64) -> f64 {
    1.0 / (4.0 * alpha * alpha) - 1.0 / (2.0 * alpha) - 1.0
}

/// Equilibrium utilities of the discussion game in closed form.
pub fn closed_form_utilities(bt: &BeliefTriple) -> Result<[f64; 3], EquilibriumError> {
    let report = region_check(bt);
    if let Some(c) = report.first_violation() {
        return Err(EquilibriumError::Region { constraint: c, detail: format!("{bt:?}") });
    }
    let d = delta(bt.alpha);
    Ok([d * (1.0 - 2.0 * bt.gamma), d * (1.0 - 2.0 * bt.beta), -d])
}

/// Expected utilities of the symmetric no-discussion family (draw convention for the
/// no-death terminal).
pub fn no_discussion_closed_form(s: f64, q: f64) -> [f64; 3] {
    let w = (1.0 - 2.0 * s) * (q * q + q - 1.0);
    [w, w, -q * q - q + 1.0]
}

/// Expected utilities of the discussion game for arbitrary q1, q2, p (draw convention).
pub fn with_discussion_closed_form(bt: &BeliefTriple, q1: f64, q2: f64, p: f64) -> [f64; 3] {
    let ns = q1 * q2 + (q2 - q1) * p + q1 - 1.0;
    let s1 = q1 * q2 + q2 - 1.0;
    let s2 = q1 * q2 + q1 - 1.0;
    let (a, b, g) = (bt.alpha, bt.beta, bt.gamma);
    [a * ns + b * s1 - g * s2, a * ns - b * s1 + g * s2, -a * ns - b * s1 - g * s2]
}

/// Largest first-order condition residual at a profile of the discussion game, by central
/// differences with step 1e-6: d E[R1]/d q1, d E[R2]/d q2, d E[R3]/d p.
pub fn stationarity_check(bt: &BeliefTriple, prof: &StrategyProfile3P) -> Result<f64, EquilibriumError> {
    let tree = build_tree_with_discussion(*bt, OutcomeRules::NoDeathDraw)?;
    const H: f64 = 1e-6;
    let eval = |p: StrategyProfile3P, player: usize| {
        tree.expected_utilities_unchecked(&p.behavior_unchecked(&tree))[player]
    };
    let d1 = (eval(StrategyProfile3P { q1: prof.q1 + H, ..*prof }, 0)
        - eval(StrategyProfile3P { q1: prof.q1 - H, ..*prof }, 0))
        / (2.0 * H);
    let d2 = (eval(StrategyProfile3P { q2: prof.q2 + H, ..*prof }, 1)
        - eval(StrategyProfile3P { q2: prof.q2 - H, ..*prof }, 1))
        / (2.0 * H);
    let d3 = (eval(StrategyProfile3P { p: prof.p + H, ..*prof }, 2)
        - eval(StrategyProfile3P { p: prof.p - H, ..*prof }, 2))
        / (2.0 * H);
    Ok(d1.abs().max(d2.abs()).max(d3.abs()))
}

/// Evenly spaced points of the region: `alpha_steps` values of alpha in [1/4, 1/2], and for
/// each, `gamma_steps` values of gamma between its bounds.
pub fn region_grid(alpha_steps: usize, gamma_steps: usize) -> Vec<BeliefTriple> {
    let frac = |i: usize, n: usize| if n <= 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
    let mut out = Vec::new();
    for i in 0..alpha_steps {
        let alpha = 0.25 + 0.25 * frac(i, alpha_steps);
        let lo = (1.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
        let hi = (2.0 * alpha * alpha - 2.0 * alpha + 1.0) / (2.0 - 2.0 * alpha);
        for j in 0..gamma_steps {
            let gamma = lo + (hi - lo) * frac(j, gamma_steps);
            let beta = (1.0 - alpha - gamma).max(0.0);
            out.push(BeliefTriple { alpha, beta, gamma });
        }
    }
    out
}

/// One row of the equilibrium table for a belief triple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateRow {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    pub closed_form: [f64; 3],
    pub traversal: [f64; 3],
    pub nash_conv: f64,
    pub stationarity: f64,
    pub pbe_passed: bool,
}

impl CertificateRow {
    /// PBE verified, traversal equal to the closed form, and first-order conditions met.
    pub fn passed(&self, tol: f64) -> bool {
        let max_diff = self
            .closed_form
            .iter()
            .zip(&self.traversal)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        self.pbe_passed
            && max_diff <= 1e-12
            && self.stationarity <= 1e-6
            && self.nash_conv <= tol
            && (0.0..=1.0).contains(&self.p)
            && (0.0..=1.0).contains(&self.q)
    }
}

/// Builds, evaluates and verifies the discussion equilibrium at one belief triple.
pub fn certify_discussion(bt: BeliefTriple, tol: f64) -> Result<(CertificateRow, PbeReport), EquilibriumError> {
    let (prof, beliefs) = discussion_equilibrium(bt)?;
    let tree = build_tree_with_discussion(bt, OutcomeRules::NoDeathDraw)?;
    let behavior = prof.behavior(&tree)?;
    let report = verify_pbe(&tree, &behavior, &beliefs.to_system(&tree), tol, &OffPathPolicy::Skip);
    let u = tree.expected_utilities(&behavior)?;
    let row = CertificateRow {
        alpha: bt.alpha,
        beta: bt.beta,
        gamma: bt.gamma,
        p: prof.p,
        q: prof.q1,
        delta: delta(bt.alpha),
        closed_form: closed_form_utilities(&bt)?,
        traversal: [u[0], u[1], u[2]],
        nash_conv: report.nash_conv,
        stationarity: stationarity_check(&bt, &prof)?,
        pbe_passed: report.passed(),
    };
    Ok((row, report))
}

/// Verifies the no-discussion equilibrium for a given `p` under the chosen rules.
pub fn certify_no_discussion(p: f64, rules: OutcomeRules, tol: f64) -> Result<(Vec<f64>, PbeReport), EquilibriumError> {
    let (prof, beliefs) = no_discussion_equilibrium(p);
    let tree = build_tree_no_discussion(rules);
    let behavior = prof.behavior(&tree)?;
    let report = verify_pbe(&tree, &behavior, &beliefs.to_system(&tree), tol, &OffPathPolicy::Skip);
    Ok((tree.expected_utilities(&behavior)?, report))
}
