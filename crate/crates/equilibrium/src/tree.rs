//! Finite extensive-form games with chance, imperfect information and exact evaluation.

use serde::{Deserialize, Serialize};

use crate::error::EquilibriumError;

pub type NodeId = usize;
pub type InfosetId = usize;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Chance { outcomes: Vec<(String, f64, NodeId)> },
    Decision { infoset: InfosetId, children: Vec<NodeId> },
    Terminal { utilities: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Infoset {
    pub player: usize,
    pub label: String,
    pub actions: Vec<String>,
    /// Member nodes, left to right.
    pub nodes: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeGame {
    pub players: usize,
    pub nodes: Vec<Node>,
    pub infosets: Vec<Infoset>,
    pub root: NodeId,
}

/// Incremental construction; decision nodes join their information set in creation order.
#[derive(Debug)]
pub struct TreeBuilder {
    game: TreeGame,
}

impl TreeBuilder {
    pub fn new(players: usize) -> Self {
        TreeBuilder { game: TreeGame { players, nodes: Vec::new(), infosets: Vec::new(), root: 0 } }
    }

    pub fn infoset(&mut self, player: usize, label: &str, actions: &[&str]) -> InfosetId {
        self.game.infosets.push(Infoset {
            player,
            label: label.to_string(),
            actions: actions.iter().map(|a| a.to_string()).collect(),
            nodes: Vec::new(),
        });
        self.game.infosets.len() - 1
    }

    /// Adds a decision node whose children are filled in later with [`set_children`].
    pub fn decision(&mut self, infoset: InfosetId) -> NodeId {
        let id = self.game.nodes.len();
        self.game.nodes.push(Node::Decision { infoset, children: Vec::new() });
        self.game.infosets[infoset].nodes.push(id);
        id
    }

    pub fn chance(&mut self) -> NodeId {
        self.game.nodes.push(Node::Chance { outcomes: Vec::new() });
        self.game.nodes.len() - 1
    }

    pub fn terminal(&mut self, utilities: Vec<f64>) -> NodeId {
        self.game.nodes.push(Node::Terminal { utilities });
        self.game.nodes.len() - 1
    }

    pub fn set_children(&mut self, node: NodeId, kids: Vec<NodeId>) {
        match &mut self.game.nodes[node] {
            Node::Decision { children, .. } => *children = kids,
            _ => panic!("node {node} is not a decision node"),
        }
    }

    pub fn set_outcomes(&mut self, node: NodeId, outs: Vec<(String, f64, NodeId)>) {
        match &mut self.game.nodes[node] {
            Node::Chance { outcomes } => *outcomes = outs,
            _ => panic!("node {node} is not a chance node"),
        }
    }

    pub fn finish(mut self, root: NodeId) -> Result<TreeGame, EquilibriumError> {
        self.game.root = root;
        self.game.validate()?;
        Ok(self.game)
    }
}

/// Per-information-set action distributions, indexed like `TreeGame::infosets`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile(pub Vec<Vec<f64>>);

/// Per-information-set distributions over member nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefSystem(pub Vec<Vec<f64>>);

/// A pure strategy for one player: an action index for each of its information sets.
pub type PureStrategy = Vec<(InfosetId, usize)>;

impl TreeGame {
    pub fn infoset_by_label(&self, label: &str) -> Option<InfosetId> {
        self.infosets.iter().position(|i| i.label == label)
    }

    pub fn infosets_of(&self, player: usize) -> Vec<InfosetId> {
        (0..self.infosets.len()).filter(|&i| self.infosets[i].player == player).collect()
    }

    /// Structure checks: child counts, chance probabilities, utility arity, perfect recall.
    pub fn validate(&self) -> Result<(), EquilibriumError> {
        let err = |m: String| Err(EquilibriumError::Tree(m));
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Decision { infoset, children } => {
                    let set = &self.infosets[*infoset];
                    if children.len() != set.actions.len() {
                        return err(format!(
                            "node {id} has {} children but `{}` has {} actions",
                            children.len(),
                            set.label,
                            set.actions.len()
                        ));
                    }
                }
                Node::Chance { outcomes } => {
                    let total: f64 = outcomes.iter().map(|o| o.1).sum();
                    if outcomes.iter().any(|o| !(o.1 >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                        return err(format!("chance node {id} probabilities sum to {total}"));
                    }
                }
                Node::Terminal { utilities } => {
                    if utilities.len() != self.players {
                        return err(format!("terminal {id} has {} utilities", utilities.len()));
                    }
                }
            }
        }
        if !self.has_perfect_recall() {
            return err("some player forgets its own past actions".into());
        }
        Ok(())
    }

    /// Every node of an information set must share the owner's own action history.
    pub fn has_perfect_recall(&self) -> bool {
        let mut own: Vec<Option<Vec<Vec<(InfosetId, usize)>>>> = vec![None; self.nodes.len()];
        let mut stack = vec![(self.root, vec![Vec::new(); self.players])];
        while let Some((id, hist)) = stack.pop() {
            match &self.nodes[id] {
                Node::Decision { infoset, children } => {
                    let pl = self.infosets[*infoset].player;
                    for (a, c) in children.iter().enumerate() {
                        let mut h = hist.clone();
                        h[pl].push((*infoset, a));
                        stack.push((*c, h));
                    }
                }
                Node::Chance { outcomes } => {
                    for o in outcomes {
                        stack.push((o.2, hist.clone()));
                    }
                }
                Node::Terminal { .. } => {}
            }
            own[id] = Some(hist);
        }
        self.infosets.iter().all(|set| {
            let first = own[set.nodes[0]].as_ref().map(|h| &h[set.player]);
            set.nodes.iter().all(|n| own[*n].as_ref().map(|h| &h[set.player]) == first)
        })
    }

    pub fn terminal_utilities(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Terminal { utilities } => Some(utilities.as_slice()),
            _ => None,
        })
    }

    pub fn check_profile(&self, profile: &BehaviorProfile) -> Result<(), EquilibriumError> {
        if profile.0.len() != self.infosets.len() {
            return Err(EquilibriumError::InvalidProfile(format!(
                "{} distributions for {} information sets",
                profile.0.len(),
                self.infosets.len()
            )));
        }
        for (set, dist) in self.infosets.iter().zip(&profile.0) {
            let sum: f64 = dist.iter().sum();
            if dist.len() != set.actions.len()
                || dist.iter().any(|x| !(0.0..=1.0).contains(x))
                || (sum - 1.0).abs() > 1e-9
            {
                return Err(EquilibriumError::InvalidProfile(format!(
                    "`{}` has distribution {dist:?}",
                    set.label
                )));
            }
        }
        Ok(())
    }

    /// Expected utility vector at `node` when everyone follows `profile`.
    pub fn node_value(&self, node: NodeId, profile: &BehaviorProfile) -> Vec<f64> {
        match &self.nodes[node] {
            Node::Terminal { utilities } => utilities.clone(),
            Node::Chance { outcomes } => {
                let mut v = vec![0.0; self.players];
                for (_, pr, c) in outcomes {
                    if *pr != 0.0 {
                        add_scaled(&mut v, &self.node_value(*c, profile), *pr);
                    }
                }
                v
            }
            Node::Decision { infoset, children } => {
                let mut v = vec![0.0; self.players];
                for (a, c) in children.iter().enumerate() {
                    let pr = profile.0[*infoset][a];
                    if pr != 0.0 {
                        add_scaled(&mut v, &self.node_value(*c, profile), pr);
                    }
                }
                v
            }
        }
    }

    /// Exact expectation over the whole tree. Does not validate the profile.
    pub fn expected_utilities_unchecked(&self, profile: &BehaviorProfile) -> Vec<f64> {
        self.node_value(self.root, profile)
    }

    pub fn expected_utilities(&self, profile: &BehaviorProfile) -> Result<Vec<f64>, EquilibriumError> {
        self.check_profile(profile)?;
        Ok(self.expected_utilities_unchecked(profile))
    }

    /// Probability of reaching each node (chance and all players' moves included).
    pub fn reach_probabilities(&self, profile: &BehaviorProfile) -> Vec<f64> {
        let mut reach = vec![0.0; self.nodes.len()];
        let mut stack = vec![(self.root, 1.0)];
        while let Some((id, r)) = stack.pop() {
            reach[id] = r;
            match &self.nodes[id] {
                Node::Decision { infoset, children } => {
                    for (a, c) in children.iter().enumerate() {
                        stack.push((*c, r * profile.0[*infoset][a]));
                    }
                }
                Node::Chance { outcomes } => {
                    for (_, pr, c) in outcomes {
                        stack.push((*c, r * pr));
                    }
                }
                Node::Terminal { .. } => {}
            }
        }
        reach
    }

    /// Bayes-consistent beliefs; `None` for information sets reached with probability zero.
    pub fn bayes_beliefs(&self, profile: &BehaviorProfile) -> Vec<Option<Vec<f64>>> {
        let reach = self.reach_probabilities(profile);
        self.infosets
            .iter()
            .map(|set| {
                let total: f64 = set.nodes.iter().map(|n| reach[*n]).sum();
                (total > 0.0).then(|| set.nodes.iter().map(|n| reach[*n] / total).collect())
            })
            .collect()
    }

    /// Every pure strategy of `player`, in lexicographic order over its information sets.
    pub fn pure_strategies(&self, player: usize) -> Vec<PureStrategy> {
        let sets = self.infosets_of(player);
        let mut out: Vec<PureStrategy> = vec![Vec::new()];
        for s in sets {
            let k = self.infosets[s].actions.len();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..k).map(move |a| {
                        let mut p = prefix.clone();
                        p.push((s, a));
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn with_pure(&self, profile: &BehaviorProfile, strategy: &PureStrategy) -> BehaviorProfile {
        let mut p = profile.clone();
        for (s, a) in strategy {
            let k = self.infosets[*s].actions.len();
            p.0[*s] = (0..k).map(|i| if i == *a { 1.0 } else { 0.0 }).collect();
        }
        p
    }

    /// Exhaustive search over the player's pure strategies with others held fixed.
    pub fn best_response(&self, profile: &BehaviorProfile, player: usize) -> (PureStrategy, f64) {
        let mut best: Option<(PureStrategy, f64)> = None;
        for s in self.pure_strategies(player) {
            let v = self.expected_utilities_unchecked(&self.with_pure(profile, &s))[player];
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((s, v));
            }
        }
        best.expect("every player has at least one pure strategy")
    }

    /// Per-player gains from deviating to a best response.
    pub fn gains(&self, profile: &BehaviorProfile) -> Vec<f64> {
        let on = self.expected_utilities_unchecked(profile);
        (0..self.players)
            .map(|i| (self.best_response(profile, i).1 - on[i]).max(0.0))
            .collect()
    }

    pub fn nash_conv(&self, profile: &BehaviorProfile) -> f64 {
        self.gains(profile).iter().sum()
    }

    /// Value for the set's owner of each action, given a belief over the set's nodes and
    /// the profile for all later play.
    pub fn action_values(&self, infoset: InfosetId, belief: &[f64], profile: &BehaviorProfile) -> Vec<f64> {
        let set = &self.infosets[infoset];
        (0..set.actions.len())
            .map(|a| {
                set.nodes
                    .iter()
                    .zip(belief)
                    .filter(|(_, b)| **b != 0.0)
                    .map(|(n, b)| {
                        let Node::Decision { children, .. } = &self.nodes[*n] else {
                            unreachable!("information sets hold decision nodes")
                        };
                        b * self.node_value(children[a], profile)[set.player]
                    })
                    .sum()
            })
            .collect()
    }
}

fn add_scaled(acc: &mut [f64], v: &[f64], w: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += w * x;
    }
}

/// How beliefs at information sets never reached under the profile are judged.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum OffPathPolicy {
    /// Any belief is acceptable.
    #[default]
    Skip,
    /// Off-path beliefs must equal the given reference system.
    Require(BeliefSystem),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfosetCheck {
    pub infoset: InfosetId,
    pub label: String,
    pub player: usize,
    pub reach: f64,
    /// `None` when the set is off path and the policy skips it.
    pub consistent: Option<bool>,
    pub belief_error: f64,
    pub rational: bool,
    /// Best action value minus the profile's value at this set.
    pub regret: f64,
    pub action_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PbeReport {
    pub checks: Vec<InfosetCheck>,
    pub nash_conv: f64,
}

impl PbeReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.consistent != Some(false))
    }

    pub fn rational(&self) -> bool {
        self.checks.iter().all(|c| c.rational)
    }

    pub fn passed(&self) -> bool {
        self.consistent() && self.rational()
    }

    pub fn check(&self, label: &str) -> Option<&InfosetCheck> {
        self.checks.iter().find(|c| c.label == label)
    }
}

/// Checks belief consistency on reached sets and sequential rationality everywhere.
pub fn verify_pbe(
    tree: &TreeGame,
    profile: &BehaviorProfile,
    beliefs: &BeliefSystem,
    tol: f64,
    off_path: &OffPathPolicy,
) -> PbeReport {
    let reach = tree.reach_probabilities(profile);
    let bayes = tree.bayes_beliefs(profile);
    let mut checks = Vec::new();
    for (id, set) in tree.infosets.iter().enumerate() {
        let belief = &beliefs.0[id];
        let total: f64 = set.nodes.iter().map(|n| reach[*n]).sum();
        let shape_ok = belief.len() == set.nodes.len()
            && belief.iter().all(|b| *b >= 0.0)
            && (belief.iter().sum::<f64>() - 1.0).abs() <= tol;
        let reference = match (&bayes[id], off_path) {
            (Some(b), _) => Some(b.clone()),
            (None, OffPathPolicy::Require(r)) => Some(r.0[id].clone()),
            (None, OffPathPolicy::Skip) => None,
        };
        let (consistent, belief_error) = match reference {
            Some(r) if shape_ok => {
                let e = r.iter().zip(belief).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (Some(e <= tol), e)
            }
            Some(_) => (Some(false), f64::INFINITY),
            None => (None, 0.0),
        };
        let (rational, regret, action_values) = if shape_ok {
            let values = tree.action_values(id, belief, profile);
            let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let dist = &profile.0[id];
            let on: f64 = values.iter().zip(dist).map(|(v, p)| v * p).sum();
            let ok = values.iter().zip(dist).all(|(v, p)| *p <= 0.0 || best - v <= tol);
            (ok, best - on, values)
        } else {
            (false, f64::INFINITY, Vec::new())
        };
        checks.push(InfosetCheck {
            infoset: id,
            label: set.label.clone(),
            player: set.player,
            reach: total,
            consistent,
            belief_error,
            rational,
            regret,
            action_values,
        });
    }
    PbeReport { checks, nash_conv: tree.nash_conv(profile) }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Matching pennies with the second mover unable to see the first move.
    fn pennies() -> TreeGame {
        let mut b = TreeBuilder::new(2);
        let i0 = b.infoset(0, "first", &["H", "T"]);
        let i1 = b.infoset(1, "second", &["H", "T"]);
        let root = b.decision(i0);
        let mut kids = Vec::new();
        for a in 0..2 {
            let n = b.decision(i1);
            let leaves = (0..2)
                .map(|c| {
                    let u = if a == c { 1.0 } else { -1.0 };
                    b.terminal(vec![u, -u])
                })
                .collect();
            b.set_children(n, leaves);
            kids.push(n);
        }
        b.set_children(root, kids);
        b.finish(root).unwrap()
    }

    #[test]
    fn mixed_equilibrium_has_zero_nash_conv() {
        let g = pennies();
        let half = BehaviorProfile(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(g.expected_utilities(&half).unwrap(), vec![0.0, 0.0]);
        assert!(g.nash_conv(&half).abs() < 1e-15);
        let pure = BehaviorProfile(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(g.nash_conv(&pure), 2.0);
    }

    #[test]
    fn perfect_recall_detects_forgetting() {
        let mut b = TreeBuilder::new(1);
        let i0 = b.infoset(0, "a", &["x", "y"]);
        let i1 = b.infoset(0, "b", &["x", "y"]);
        let root = b.decision(i0);
        let n1 = b.decision(i1);
        let n2 = b.decision(i1);
        let t: Vec<_> = (0..4).map(|k| b.terminal(vec![k as f64])).collect();
        b.set_children(n1, vec![t[0], t[1]]);
        b.set_children(n2, vec![t[2], t[3]]);
        b.set_children(root, vec![n1, n2]);
        assert!(matches!(b.finish(root), Err(EquilibriumError::Tree(_))));
    }

    #[test]
    fn bad_profile_rejected() {
        let g = pennies();
        let p = BehaviorProfile(vec![vec![0.7, 0.7], vec![0.5, 0.5]]);
        assert!(g.expected_utilities(&p).is_err());
    }
}
