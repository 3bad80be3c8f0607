//! Conservative Q-learning over the six discussion tactics.

use std::path::Path;

use onuw_core::{Tactic, TACTIC_COUNT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Transition;
use crate::error::PolicyError;
use crate::qnet::{Adam, Mlp, MlpGrad};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainerConfig {
    pub learning_rate: f64,
    pub discount: f64,
    pub batch_size: usize,
    /// Weight of the conservative term.
    pub trade_off: f64,
    pub critics: usize,
    pub target_update_interval: usize,
    pub epochs: usize,
    pub steps_per_epoch: usize,
    pub rng_seed: u64,
    pub state_dim: usize,
    pub action_dim: usize,
    pub hidden: Vec<usize>,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            learning_rate: 5e-5,
            discount: 0.99,
            batch_size: 32,
            trade_off: 4.0,
            critics: 2,
            target_update_interval: 1000,
            epochs: 100,
            steps_per_epoch: 5000,
            rng_seed: 0,
            state_dim: 1536,
            action_dim: TACTIC_COUNT,
            hidden: vec![256, 256],
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<(), PolicyError> {
        let bad = |m: &str| Err(PolicyError::Config(m.to_string()));
        if self.action_dim != TACTIC_COUNT {
            return bad("action_dim must be 6");
        }
        if !(self.learning_rate > 0.0)
            || !(0.0..=1.0).contains(&self.discount)
            || !(self.trade_off >= 0.0)
        {
            return bad("learning_rate must be positive, discount in [0,1], trade_off >= 0");
        }
        if self.batch_size == 0
            || self.critics == 0
            || self.target_update_interval == 0
            || self.epochs == 0
            || self.steps_per_epoch == 0
            || self.state_dim == 0
        {
            return bad("batch_size, critics, target_update_interval, epochs, steps_per_epoch and state_dim must be positive");
        }
        Ok(())
    }
}

/// Twin critics plus their target copies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QFunction {
    pub critics: Vec<Mlp>,
    pub targets: Vec<Mlp>,
}

impl QFunction {
    pub fn new(cfg: &TrainerConfig, rng: &mut ChaCha8Rng) -> Self {
        let critics: Vec<Mlp> = (0..cfg.critics)
            .map(|_| Mlp::new(cfg.state_dim, &cfg.hidden, cfg.action_dim, rng))
            .collect();
        QFunction {
            targets: critics.clone(),
            critics,
        }
    }

    pub fn zeros(cfg: &TrainerConfig) -> Self {
        let critics: Vec<Mlp> = (0..cfg.critics)
            .map(|_| Mlp::zeros(cfg.state_dim, &cfg.hidden, cfg.action_dim))
            .collect();
        QFunction {
            targets: critics.clone(),
            critics,
        }
    }

    pub fn state_dim(&self) -> usize {
        self.critics[0].input_dim()
    }

    /// Mean of the critics' action values.
    pub fn q_values(&self, state: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; TACTIC_COUNT];
        for c in &self.critics {
            for (o, v) in out.iter_mut().zip(c.forward(state)) {
                *o += v / self.critics.len() as f64;
            }
        }
        out
    }

    /// Element-wise minimum over the target critics.
    pub fn target_values(&self, state: &[f64]) -> Vec<f64> {
        let mut out = vec![f64::INFINITY; TACTIC_COUNT];
        for t in &self.targets {
            for (o, v) in out.iter_mut().zip(t.forward(state)) {
                *o = o.min(v);
            }
        }
        out
    }

    pub fn refresh_targets(&mut self) {
        self.targets = self.critics.clone();
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PolicyError> {
        let art = QArtifact {
            tactic_mapping: Tactic::mapping(),
            q: self.clone(),
        };
        std::fs::write(path, serde_json::to_string(&art).expect("serializable"))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PolicyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| PolicyError::Config(format!("Q-function {}: {e}", path.display())))?;
        let art: QArtifact = serde_json::from_str(&text)
            .map_err(|e| PolicyError::Format(format!("{}: {e}", path.display())))?;
        if !Tactic::mapping_matches(&art.tactic_mapping) {
            return Err(PolicyError::Format("tactic mapping differs".into()));
        }
        Ok(art.q)
    }
}

#[derive(Serialize, Deserialize)]
struct QArtifact {
    tactic_mapping: Vec<String>,
    q: QFunction,
}

fn logsumexp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_batch(q: &QFunction, batch: &[Transition]) -> Result<(), PolicyError> {
    if batch.is_empty() {
        return Err(PolicyError::Config("empty batch".into()));
    }
    let d = q.state_dim();
    for (i, t) in batch.iter().enumerate() {
        if t.state.len() != d || t.next_state.len() != d {
            return Err(PolicyError::Config(format!(
                "row {i} has dimension {} (expected {d})",
                t.state.len()
            )));
        }
        if t.tactic >= TACTIC_COUNT {
            return Err(PolicyError::Config(format!(
                "row {i} has tactic index {}",
                t.tactic
            )));
        }
    }
    Ok(())
}

/// Bellman targets from the (frozen) target critics.
fn targets(q: &QFunction, batch: &[Transition], discount: f64) -> Result<Vec<f64>, PolicyError> {
    batch
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let y = if t.terminal {
                t.reward
            } else {
                let next = q.target_values(&t.next_state);
                t.reward + discount * next.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            };
            if y.is_finite() {
                Ok(y)
            } else {
                Err(PolicyError::Numeric {
                    index: i,
                    detail: format!("Bellman target {y}"),
                })
            }
        })
        .collect()
}

/// Loss of one critic on a batch, optionally accumulating its gradient.
fn critic_loss(
    net: &Mlp,
    batch: &[Transition],
    ys: &[f64],
    rho: f64,
    mut grad: Option<&mut MlpGrad>,
) -> Result<f64, PolicyError> {
    let n = batch.len() as f64;
    let mut loss = 0.0;
    for (i, (t, y)) in batch.iter().zip(ys).enumerate() {
        let (qs, cache) = net.forward_cached(&t.state);
        if qs.iter().any(|v| !v.is_finite()) {
            return Err(PolicyError::Numeric {
                index: i,
                detail: format!("Q values {qs:?}"),
            });
        }
        let lse = logsumexp(&qs);
        let qd = qs[t.tactic];
        loss += (rho * (lse - qd) + 0.5 * (qd - y).powi(2)) / n;
        if let Some(g) = grad.as_deref_mut() {
            let mut dout: Vec<f64> = qs.iter().map(|v| rho * (v - lse).exp() / n).collect();
            dout[t.tactic] += (-rho + (qd - y)) / n;
            net.backward(&cache, &dout, g);
        }
    }
    Ok(loss)
}

/// Mean over critics of ρ·E[logsumexp Q − Q(s, z_data)] + ½·E[(Q(s, z_data) − y)²].
pub fn cql_loss(
    q: &QFunction,
    batch: &[Transition],
    cfg: &TrainerConfig,
) -> Result<f64, PolicyError> {
    check_batch(q, batch)?;
    let ys = targets(q, batch, cfg.discount)?;
    let mut total = 0.0;
    for c in &q.critics {
        total += critic_loss(c, batch, &ys, cfg.trade_off, None)?;
    }
    Ok(total / q.critics.len() as f64)
}

/// Loss and per-critic gradients (target critics are held fixed).
pub fn cql_loss_and_grads(
    q: &QFunction,
    batch: &[Transition],
    cfg: &TrainerConfig,
) -> Result<(f64, Vec<MlpGrad>), PolicyError> {
    check_batch(q, batch)?;
    let ys = targets(q, batch, cfg.discount)?;
    let k = q.critics.len() as f64;
    let mut total = 0.0;
    let mut grads = Vec::with_capacity(q.critics.len());
    for c in &q.critics {
        let mut g = MlpGrad::zeros_like(c);
        total += critic_loss(c, batch, &ys, cfg.trade_off, Some(&mut g))?;
        g.scale(1.0 / k);
        grads.push(g);
    }
    Ok((total / k, grads))
}

/// Largest relative error between `analytic` gradients and central differences (step
/// 1e-5) of the loss over every critic parameter.
pub fn grad_check_with<F>(
    q: &QFunction,
    batch: &[Transition],
    cfg: &TrainerConfig,
    analytic: F,
) -> Result<f64, PolicyError>
where
    F: Fn(&QFunction, &[Transition], &TrainerConfig) -> Result<Vec<MlpGrad>, PolicyError>,
{
    const H: f64 = 1e-5;
    let grads = analytic(q, batch, cfg)?;
    let mut worst: f64 = 0.0;
    for (ci, g) in grads.iter().enumerate() {
        let flat = g.flat();
        for (pi, a) in flat.iter().enumerate() {
            let mut plus = q.clone();
            *plus.critics[ci].params_mut().nth(pi).unwrap() += H;
            let mut minus = q.clone();
            *minus.critics[ci].params_mut().nth(pi).unwrap() -= H;
            let num = (cql_loss(&plus, batch, cfg)? - cql_loss(&minus, batch, cfg)?) / (2.0 * H);
            let err = (a - num).abs() / a.abs().max(num.abs()).max(1e-3);
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

pub fn grad_check(
    q: &QFunction,
    batch: &[Transition],
    cfg: &TrainerConfig,
) -> Result<f64, PolicyError> {
    grad_check_with(q, batch, cfg, |q, b, c| {
        cql_loss_and_grads(q, b, c).map(|r| r.1)
    })
}

/// Mini-batch training; returns the network and the mean loss of each epoch.
pub fn train(
    dataset: &[Transition],
    cfg: &TrainerConfig,
) -> Result<(QFunction, Vec<f64>), PolicyError> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(PolicyError::Config("empty dataset".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut q = QFunction::new(cfg, &mut rng);
    check_batch(&q, dataset)?;
    let mut opts: Vec<Adam> = q
        .critics
        .iter()
        .map(|c| Adam::new(c, cfg.learning_rate))
        .collect();
    let mut curve = Vec::with_capacity(cfg.epochs);
    let mut step = 0usize;
    for _ in 0..cfg.epochs {
        let mut sum = 0.0;
        for _ in 0..cfg.steps_per_epoch {
            let batch: Vec<Transition> = (0..cfg.batch_size)
                .map(|_| dataset[rng.gen_range(0..dataset.len())].clone())
                .collect();
            let (loss, grads) = cql_loss_and_grads(&q, &batch, cfg)?;
            sum += loss;
            for ((c, o), g) in q.critics.iter_mut().zip(&mut opts).zip(&grads) {
                o.step(c, g);
            }
            step += 1;
            if step.is_multiple_of(cfg.target_update_interval) {
                q.refresh_targets();
            }
        }
        curve.push(sum / cfg.steps_per_epoch as f64);
    }
    Ok((q, curve))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SelectionMode {
    Greedy,
    Softmax { temperature: f64 },
}

/// Greedy picks the highest value (lowest index on ties); softmax samples ∝ exp(Q/T).
pub fn select_tactic_from_values<R: Rng>(
    values: &[f64],
    mode: SelectionMode,
    rng: &mut R,
) -> Result<Tactic, PolicyError> {
    if values.len() != TACTIC_COUNT || values.iter().any(|v| !v.is_finite()) {
        return Err(PolicyError::Numeric {
            index: 0,
            detail: format!("Q values {values:?}"),
        });
    }
    let best = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
    let idx = match mode {
        SelectionMode::Greedy => best,
        SelectionMode::Softmax { temperature } => {
            if !(temperature > 0.0) {
                return Err(PolicyError::Config(format!(
                    "temperature {temperature} must be positive"
                )));
            }
            let w: Vec<f64> = values
                .iter()
                .map(|v| ((v - values[best]) / temperature).exp())
                .collect();
            let total: f64 = w.iter().sum();
            let mut u = rng.gen::<f64>() * total;
            let mut pick = TACTIC_COUNT - 1;
            for (i, wi) in w.iter().enumerate() {
                if u < *wi {
                    pick = i;
                    break;
                }
                u -= wi;
            }
            pick
        }
    };
    Ok(Tactic::from_index(idx).expect("index in range"))
}

pub fn select_tactic<R: Rng>(
    q: &QFunction,
    state: &[f64],
    mode: SelectionMode,
    rng: &mut R,
) -> Result<Tactic, PolicyError> {
    if state.len() != q.state_dim() {
        return Err(PolicyError::Config(format!(
            "state has dimension {}, network expects {}",
            state.len(),
            q.state_dim()
        )));
    }
    select_tactic_from_values(&q.q_values(state), mode, rng)
}
