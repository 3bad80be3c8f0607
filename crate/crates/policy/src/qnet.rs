//! Small tanh MLP critics with hand-written backpropagation.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs × inputs`.
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

impl Dense {
    fn new<R: Rng>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        let bound = (6.0 / (inputs + outputs) as f64).sqrt();
        Dense {
            inputs,
            outputs,
            w: (0..inputs * outputs)
                .map(|_| rng.gen_range(-bound..bound))
                .collect(),
            b: vec![0.0; outputs],
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let row = &self.w[o * self.inputs..(o + 1) * self.inputs];
                self.b[o] + row.iter().zip(x).map(|(w, x)| w * x).sum::<f64>()
            })
            .collect()
    }
}

/// `dim → hidden → … → hidden → actions`, tanh between layers, linear output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Dense>,
}

/// Gradients with the same shapes as an [`Mlp`].
#[derive(Clone, Debug, PartialEq)]
pub struct MlpGrad {
    pub w: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

impl MlpGrad {
    pub fn zeros_like(net: &Mlp) -> Self {
        MlpGrad {
            w: net.layers.iter().map(|l| vec![0.0; l.w.len()]).collect(),
            b: net.layers.iter().map(|l| vec![0.0; l.b.len()]).collect(),
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        self.w
            .iter()
            .zip(&self.b)
            .flat_map(|(w, b)| w.iter().chain(b))
            .copied()
            .collect()
    }

    pub fn scale(&mut self, k: f64) {
        for v in self.w.iter_mut().chain(self.b.iter_mut()) {
            v.iter_mut().for_each(|x| *x *= k);
        }
    }
}

impl Mlp {
    pub fn new<R: Rng>(dim: usize, hidden: &[usize], actions: usize, rng: &mut R) -> Self {
        let mut sizes = vec![dim];
        sizes.extend_from_slice(hidden);
        sizes.push(actions);
        Mlp {
            layers: sizes
                .windows(2)
                .map(|w| Dense::new(w[0], w[1], rng))
                .collect(),
        }
    }

    /// All parameters zero, so every output is zero.
    pub fn zeros(dim: usize, hidden: &[usize], actions: usize) -> Self {
        let mut sizes = vec![dim];
        sizes.extend_from_slice(hidden);
        sizes.push(actions);
        Mlp {
            layers: sizes
                .windows(2)
                .map(|w| Dense {
                    inputs: w[0],
                    outputs: w[1],
                    w: vec![0.0; w[0] * w[1]],
                    b: vec![0.0; w[1]],
                })
                .collect(),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.w.iter_mut().chain(l.b.iter_mut()))
    }

    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.layers
            .iter()
            .flat_map(|l| l.w.iter().chain(l.b.iter()))
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut h = x.to_vec();
        for (i, l) in self.layers.iter().enumerate() {
            h = l.forward(&h);
            if i + 1 < self.layers.len() {
                h.iter_mut().for_each(|v| *v = v.tanh());
            }
        }
        h
    }

    /// Forward pass keeping each layer's input for backpropagation.
    pub fn forward_cached(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut h = x.to_vec();
        for (i, l) in self.layers.iter().enumerate() {
            inputs.push(h.clone());
            h = l.forward(&h);
            if i + 1 < self.layers.len() {
                h.iter_mut().for_each(|v| *v = v.tanh());
            }
        }
        (h, inputs)
    }

    /// Accumulates the parameter gradient for output gradient `dout` into `grad`.
    pub fn backward(&self, inputs: &[Vec<f64>], dout: &[f64], grad: &mut MlpGrad) {
        let mut d = dout.to_vec();
        for li in (0..self.layers.len()).rev() {
            let l = &self.layers[li];
            let x = &inputs[li];
            for o in 0..l.outputs {
                if d[o] == 0.0 {
                    continue;
                }
                grad.b[li][o] += d[o];
                let gw = &mut grad.w[li][o * l.inputs..(o + 1) * l.inputs];
                for (g, xi) in gw.iter_mut().zip(x) {
                    *g += d[o] * xi;
                }
            }
            if li == 0 {
                break;
            }
            // x is tanh of the previous pre-activation, so dtanh = 1 − x².
            let mut dx = vec![0.0; l.inputs];
            for o in 0..l.outputs {
                if d[o] == 0.0 {
                    continue;
                }
                let row = &l.w[o * l.inputs..(o + 1) * l.inputs];
                for (dxi, w) in dx.iter_mut().zip(row) {
                    *dxi += d[o] * w;
                }
            }
            for (dxi, xi) in dx.iter_mut().zip(x) {
                *dxi *= 1.0 - xi * xi;
            }
            d = dx;
        }
    }
}

/// Adam state for one network.
#[derive(Clone, Debug)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: i32,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(net: &Mlp, lr: f64) -> Self {
        let n = net.param_count();
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn step(&mut self, net: &mut Mlp, grad: &MlpGrad) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (i, (p, g)) in net.params_mut().zip(grad.flat()).enumerate() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            *p -= self.lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + self.eps);
        }
    }
}
