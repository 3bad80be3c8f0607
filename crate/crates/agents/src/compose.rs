//! Check that a player composed of a belief, a tactic selector and a tactic-conditioned
//! action rule acts according to the mixture
//! `π(a) = Σ_θ b(θ) Σ_z μ(z | θ) π̃(a | θ, z)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::AgentError;

/// Finite components: `belief[θ]`, `selector[θ][z]`, `action[θ][z][a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedPolicy {
    pub belief: Vec<f64>,
    pub selector: Vec<Vec<f64>>,
    pub action: Vec<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionReport {
    pub analytic: Vec<f64>,
    pub empirical: Vec<f64>,
    pub total_variation: f64,
    pub rollouts: usize,
}

impl CompositionReport {
    pub fn within(&self, tol: f64) -> bool {
        self.total_variation <= tol
    }
}

fn check_dist(p: &[f64], what: &str) -> Result<(), AgentError> {
    let s: f64 = p.iter().sum();
    if p.is_empty() || p.iter().any(|x| !(*x >= 0.0)) || (s - 1.0).abs() > 1e-9 {
        return Err(AgentError::Config(format!("{what} is not a distribution")));
    }
    Ok(())
}

impl ComposedPolicy {
    pub fn action_count(&self) -> usize {
        self.action.first().and_then(|z| z.first()).map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        check_dist(&self.belief, "belief")?;
        if self.selector.len() != self.belief.len() || self.action.len() != self.belief.len() {
            return Err(AgentError::Config("component sizes differ".into()));
        }
        let k = self.action_count();
        for (t, (mu, pis)) in self.selector.iter().zip(&self.action).enumerate() {
            check_dist(mu, &format!("selector for type {t}"))?;
            if pis.len() != mu.len() {
                return Err(AgentError::Config(format!("type {t}: tactic counts differ")));
            }
            for (z, pi) in pis.iter().enumerate() {
                if pi.len() != k {
                    return Err(AgentError::Config(format!("type {t}, tactic {z}: action counts differ")));
                }
                check_dist(pi, &format!("action rule for type {t}, tactic {z}"))?;
            }
        }
        Ok(())
    }

    pub fn mixture(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.action_count()];
        for (t, b) in self.belief.iter().enumerate() {
            for (z, mu) in self.selector[t].iter().enumerate() {
                for (a, pi) in self.action[t][z].iter().enumerate() {
                    out[a] += b * mu * pi;
                }
            }
        }
        out
    }

    /// One decision: draw a type from the belief, a tactic from the selector, then an action.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let t = WeightedIndex::new(&self.belief).expect("validated").sample(rng);
        let z = WeightedIndex::new(&self.selector[t]).expect("validated").sample(rng);
        WeightedIndex::new(&self.action[t][z]).expect("validated").sample(rng)
    }
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Compares `rollouts` seeded samples of the composed player with the analytic mixture.
pub fn compose_policy_check(
    policy: &ComposedPolicy,
    rollouts: usize,
    seed: u64,
) -> Result<CompositionReport, AgentError> {
    policy.validate()?;
    if rollouts == 0 {
        return Err(AgentError::Config("need at least one rollout".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; policy.action_count()];
    for _ in 0..rollouts {
        counts[policy.sample(&mut rng)] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|c| *c as f64 / rollouts as f64).collect();
    let analytic = policy.mixture();
    Ok(CompositionReport {
        total_variation: total_variation(&analytic, &empirical),
        analytic,
        empirical,
        rollouts,
    })
}
