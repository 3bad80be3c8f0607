//! Exact Bayesian filtering over a finite support of joint types.
//!
//! A [`Belief`] is an immutable-by-convention probability vector over a list of
//! joint types. Updates multiply by a likelihood and renormalise; when any
//! likelihood falls below [`LOG_SPACE_THRESHOLD`] the product is taken in log
//! space so long games do not underflow.

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::claim::Claim;
use crate::error::BeliefError;
use crate::game::Assignment;
use crate::role::{PlayerId, RoleCard, ALL_ROLES};

pub const LOG_SPACE_THRESHOLD: f64 = 1e-30;

/// Gives the role held by each player in a joint type.
pub trait RoleView {
    fn player_count(&self) -> usize;
    /// Role held at the end of the night.
    fn role_of(&self, player: PlayerId) -> RoleCard;
    /// Role dealt at the start. Defaults to [`RoleView::role_of`].
    fn initial_role_of(&self, player: PlayerId) -> RoleCard {
        self.role_of(player)
    }
}

impl RoleView for Assignment {
    fn player_count(&self) -> usize {
        self.player_roles.len()
    }

    fn role_of(&self, player: PlayerId) -> RoleCard {
        self.player_roles[player.index()]
    }
}

/// `p(obs | type, history)`.
pub trait LikelihoodModel<T, O> {
    fn likelihood(&self, obs: &O, ty: &T, history: &[O]) -> f64;
}

impl<T, O, F> LikelihoodModel<T, O> for F
where
    F: Fn(&O, &T, &[O]) -> f64,
{
    fn likelihood(&self, obs: &O, ty: &T, history: &[O]) -> f64 {
        self(obs, ty, history)
    }
}

/// Scores a structured speech claim 1 when it is consistent with the joint type
/// and `lambda` otherwise.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ClaimConsistency {
    pub lambda: f64,
}

impl Default for ClaimConsistency {
    fn default() -> Self {
        ClaimConsistency { lambda: 0.2 }
    }
}

impl<T: RoleView> LikelihoodModel<T, Claim> for ClaimConsistency {
    fn likelihood(&self, claim: &Claim, ty: &T, _history: &[Claim]) -> f64 {
        if claim.subject.index() >= ty.player_count() {
            return self.lambda;
        }
        if claim.holds(ty.initial_role_of(claim.subject), ty.role_of(claim.subject)) {
            1.0
        } else {
            self.lambda
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Belief<T> {
    support: Vec<T>,
    probs: Vec<f64>,
}

impl<T> Belief<T> {
    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().zip(self.probs.iter().copied())
    }

    /// Drops types with zero probability.
    pub fn prune(&mut self) {
        let mut keep = self.probs.iter().map(|p| *p > 0.0);
        self.support.retain(|_| keep.next().unwrap());
        self.probs.retain(|p| *p > 0.0);
    }

    /// In-place version of [`Belief::update`].
    pub fn update_in_place<O, L>(&mut self, obs: &O, history: &[O], lik: &L) -> Result<(), BeliefError>
    where
        L: LikelihoodModel<T, O> + ?Sized,
    {
        let mut liks = Vec::with_capacity(self.support.len());
        let mut small = false;
        for ty in &self.support {
            let l = lik.likelihood(obs, ty, history);
            if !l.is_finite() || l < 0.0 {
                return Err(BeliefError::InvalidLikelihood { value: l });
            }
            if l > 0.0 && l < LOG_SPACE_THRESHOLD {
                small = true;
            }
            liks.push(l);
        }
        let posterior = if small {
            let logs: Vec<f64> = self
                .probs
                .iter()
                .zip(&liks)
                .map(|(p, l)| p.ln() + l.ln())
                .collect();
            normalize_logs(&logs)?
        } else {
            let un: Vec<f64> = self.probs.iter().zip(&liks).map(|(p, l)| p * l).collect();
            normalize(&un)?
        };
        self.probs = posterior;
        Ok(())
    }

    /// Posterior marginal over `f(type)` taking values in `0..6`.
    pub fn marginal_by<F>(&self, mut f: F) -> [f64; 6]
    where
        F: FnMut(&T) -> RoleCard,
    {
        let mut m = [0.0; 6];
        for (ty, p) in self.iter() {
            m[f(ty).index()] += p;
        }
        m
    }
}

impl<T: Clone> Belief<T> {
    /// Bayes update; returns the posterior and leaves `self` untouched.
    pub fn update<O, L>(&self, obs: &O, history: &[O], lik: &L) -> Result<Belief<T>, BeliefError>
    where
        L: LikelihoodModel<T, O> + ?Sized,
    {
        let mut next = self.clone();
        next.update_in_place(obs, history, lik)?;
        Ok(next)
    }
}

impl<T: Eq + Hash> Belief<T> {
    pub fn uniform(support: Vec<T>) -> Result<Self, BeliefError> {
        let n = support.len();
        if n == 0 {
            return Err(BeliefError::EmptySupport);
        }
        check_distinct(&support)?;
        Ok(Belief { support, probs: vec![1.0 / n as f64; n] })
    }

    /// Normalises nonnegative weights into a belief.
    pub fn from_weights(support: Vec<T>, weights: Vec<f64>) -> Result<Self, BeliefError> {
        if support.is_empty() {
            return Err(BeliefError::EmptySupport);
        }
        if support.len() != weights.len() {
            return Err(BeliefError::InvalidWeights(format!(
                "{} types but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(BeliefError::InvalidWeights("weights must be finite and >= 0".into()));
        }
        check_distinct(&support)?;
        let probs = normalize(&weights).map_err(|_| {
            BeliefError::InvalidWeights("weights sum to zero".into())
        })?;
        Ok(Belief { support, probs })
    }
}

impl<T: RoleView> Belief<T> {
    /// Probability of each role (in [`ALL_ROLES`] order) for `player`'s final card.
    pub fn marginal(&self, player: PlayerId) -> [f64; 6] {
        self.marginal_by(|t| t.role_of(player))
    }

    /// Same for the dealt card.
    pub fn initial_marginal(&self, player: PlayerId) -> [f64; 6] {
        self.marginal_by(|t| t.initial_role_of(player))
    }
}

/// Uniform prior over `support`.
pub fn uniform_prior<T: Eq + Hash>(support: Vec<T>) -> Result<Belief<T>, BeliefError> {
    Belief::uniform(support)
}

/// Checks that updating one observation at a time yields the same posterior as a
/// single update with the product likelihood, within `1e-10` per entry.
pub fn chain_equals_batch<T, O, L>(prior: &Belief<T>, observations: &[O], lik: &L) -> bool
where
    T: Clone,
    L: LikelihoodModel<T, O> + ?Sized,
{
    let mut chained = prior.clone();
    for (k, obs) in observations.iter().enumerate() {
        if chained.update_in_place(obs, &observations[..k], lik).is_err() {
            return false;
        }
    }
    let logs: Vec<f64> = prior
        .support
        .iter()
        .zip(&prior.probs)
        .map(|(ty, p)| {
            let mut acc = p.ln();
            for (k, obs) in observations.iter().enumerate() {
                acc += lik.likelihood(obs, ty, &observations[..k]).ln();
            }
            acc
        })
        .collect();
    let Ok(batch) = normalize_logs(&logs) else {
        return false;
    };
    chained
        .probs
        .iter()
        .zip(&batch)
        .all(|(a, b)| (a - b).abs() <= 1e-10)
}

fn check_distinct<T: Eq + Hash>(support: &[T]) -> Result<(), BeliefError> {
    let mut seen = HashSet::with_capacity(support.len());
    if support.iter().all(|t| seen.insert(t)) {
        Ok(())
    } else {
        Err(BeliefError::DuplicateSupport)
    }
}

fn normalize(un: &[f64]) -> Result<Vec<f64>, BeliefError> {
    let total: f64 = un.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(BeliefError::ImpossibleObservation);
    }
    Ok(un.iter().map(|x| x / total).collect())
}

fn normalize_logs(logs: &[f64]) -> Result<Vec<f64>, BeliefError> {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return Err(BeliefError::ImpossibleObservation);
    }
    let un: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    normalize(&un)
}

/// What an agent believes about everyone's final role.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefReport {
    /// One normalised 6-vector per player, columns in [`ALL_ROLES`] order.
    pub marginals: Vec<[f64; 6]>,
    pub rationale: String,
    pub self_estimate: RoleCard,
    /// Set when the report is a fallback (e.g. unparseable model output).
    #[serde(default)]
    pub degraded: bool,
}

impl BeliefReport {
    /// Every player uniform over the six roles.
    pub fn uniform(player_count: usize, own_role: RoleCard) -> Self {
        BeliefReport {
            marginals: vec![[1.0 / 6.0; 6]; player_count],
            rationale: String::new(),
            self_estimate: own_role,
            degraded: false,
        }
    }

    pub fn werewolf_prob(&self, player: PlayerId) -> f64 {
        self.marginals[player.index()][RoleCard::Werewolf.index()]
    }

    pub fn most_likely(&self, player: PlayerId) -> RoleCard {
        argmax_role(&self.marginals[player.index()])
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        self.marginals
            .iter()
            .all(|m| (m.iter().sum::<f64>() - 1.0).abs() <= tol && m.iter().all(|p| *p >= 0.0))
    }
}

/// Role with the highest probability; lowest role index wins ties.
pub fn argmax_role(m: &[f64; 6]) -> RoleCard {
    let mut best = 0;
    for i in 1..6 {
        if m[i] > m[best] {
            best = i;
        }
    }
    ALL_ROLES[best]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> Belief<u8> {
        Belief::uniform(vec![0u8, 1, 2]).unwrap()
    }

    fn table(values: &'static [f64]) -> impl Fn(&(), &u8, &[()]) -> f64 {
        move |_, t, _| values[*t as usize]
    }

    #[test]
    fn uniform_prior_values() {
        assert_eq!(three().probs(), &[1.0 / 3.0; 3]);
        assert_eq!(Belief::uniform(vec![7u8]).unwrap().probs(), &[1.0]);
        assert_eq!(Belief::<u8>::uniform(vec![]), Err(BeliefError::EmptySupport));
        assert_eq!(Belief::uniform(vec![1u8, 1]), Err(BeliefError::DuplicateSupport));
    }

    #[test]
    fn indicator_elimination() {
        let post = three().update(&(), &[], &table(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(post.probs(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn hand_example() {
        let prior = Belief::from_weights(vec![0u8, 1, 2], vec![0.5, 0.3, 0.2]).unwrap();
        let post = prior.update(&(), &[], &table(&[0.2, 0.5, 0.3])).unwrap();
        let expected = [10.0 / 31.0, 15.0 / 31.0, 6.0 / 31.0];
        for (a, b) in post.probs().iter().zip(expected) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn impossible_observation() {
        let err = three().update(&(), &[], &table(&[0.0, 0.0, 0.0])).unwrap_err();
        assert_eq!(err, BeliefError::ImpossibleObservation);
    }

    #[test]
    fn rejects_bad_likelihood() {
        let err = three().update(&(), &[], &table(&[1.0, f64::NAN, 0.0])).unwrap_err();
        assert!(matches!(err, BeliefError::InvalidLikelihood { .. }));
        let err = three().update(&(), &[], &table(&[1.0, -1.0, 0.0])).unwrap_err();
        assert!(matches!(err, BeliefError::InvalidLikelihood { .. }));
    }

    #[test]
    fn tiny_likelihoods_use_log_space() {
        // Products of these underflow to zero in direct arithmetic.
        let lik = table(&[1e-300, 2e-300, 1e-310]);
        let mut b = three();
        for _ in 0..3 {
            b.update_in_place(&(), &[], &lik).unwrap();
        }
        let total = 1.0 + 8.0 + 1e-30;
        assert!((b.probs()[0] - 1.0 / total).abs() < 1e-12);
        assert!((b.probs()[1] - 8.0 / total).abs() < 1e-12);
    }

    #[test]
    fn prune_drops_zeros() {
        let mut post = three().update(&(), &[], &table(&[1.0, 0.0, 1.0])).unwrap();
        post.prune();
        assert_eq!(post.support(), &[0, 2]);
        assert_eq!(post.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn argmax_tie_break() {
        assert_eq!(argmax_role(&[0.2, 0.2, 0.2, 0.2, 0.1, 0.1]), RoleCard::Werewolf);
        assert_eq!(argmax_role(&[0.0, 0.1, 0.9, 0.0, 0.0, 0.0]), RoleCard::Seer);
    }
}
