//! Feed-forward network trained by mini-batch gradient descent with
//! backpropagation, used for the peak-heat-flux stage.

use super::dataset::Standardizer;
use super::SurrogateError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Epochs without meaningful improvement before the step size halves.
    pub plateau_patience: usize,
    pub min_relative_improvement: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![64, 64],
            learning_rate: 0.02,
            momentum: 0.9,
            epochs: 500,
            batch_size: 32,
            seed: 17,
            plateau_patience: 25,
            min_relative_improvement: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Dense {
    /// Row-major out x in weights.
    w: Vec<f64>,
    b: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Dense {
    fn forward(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for r in 0..self.rows {
            let mut v = self.b[r];
            let row = &self.w[r * self.cols..(r + 1) * self.cols];
            for (wi, xi) in row.iter().zip(x) {
                v += wi * xi;
            }
            out.push(v);
        }
    }
}

/// A fitted MLP with tanh hidden activations and a linear output, plus the
/// standardization of inputs and target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<Dense>,
    x_std: Standardizer,
    y_std: Standardizer,
    pub config: MlpConfig,
    /// Mean squared training loss per epoch (standardized units).
    pub loss_history: Vec<f64>,
}

struct Workspace {
    /// Pre-activation and activation per layer.
    pre: Vec<Vec<f64>>,
    act: Vec<Vec<f64>>,
}

impl Mlp {
    fn init_layers(dims: &[usize], rng: &mut ChaCha8Rng) -> Vec<Dense> {
        dims.windows(2)
            .map(|w| {
                let (nin, nout) = (w[0], w[1]);
                let scale = (1.0 / nin as f64).sqrt();
                Dense {
                    w: (0..nin * nout).map(|_| rng.gen_range(-scale..scale)).collect(),
                    b: vec![0.0; nout],
                    rows: nout,
                    cols: nin,
                }
            })
            .collect()
    }

    fn forward_std(&self, x: &[f64], ws: &mut Workspace) -> f64 {
        let n_layers = self.layers.len();
        let mut input = x.to_vec();
        ws.pre.clear();
        ws.act.clear();
        for (li, layer) in self.layers.iter().enumerate() {
            let mut pre = Vec::new();
            layer.forward(&input, &mut pre);
            let act: Vec<f64> = if li + 1 < n_layers {
                pre.iter().map(|v| v.tanh()).collect()
            } else {
                pre.clone()
            };
            ws.pre.push(pre);
            input = act.clone();
            ws.act.push(act);
        }
        ws.act.last().unwrap()[0]
    }

    /// Backpropagation for one sample; accumulates gradients of the squared
    /// error 0.5*(pred-y)^2 into `grads` (one flat [w|b] block per layer).
    fn accumulate_grads(
        &self,
        x: &[f64],
        y: f64,
        ws: &mut Workspace,
        grads: &mut [Vec<f64>],
    ) -> f64 {
        let pred = self.forward_std(x, ws);
        let err = pred - y;
        let n_layers = self.layers.len();
        // delta at the output (linear)
        let mut delta = vec![err];
        for li in (0..n_layers).rev() {
            let layer = &self.layers[li];
            let input: &[f64] = if li == 0 { x } else { &ws.act[li - 1] };
            let g = &mut grads[li];
            for r in 0..layer.rows {
                let dr = delta[r];
                let wrow = r * layer.cols;
                for c in 0..layer.cols {
                    g[wrow + c] += dr * input[c];
                }
                g[layer.rows * layer.cols + r] += dr;
            }
            if li > 0 {
                let prev = &self.layers[li];
                let mut next_delta = vec![0.0; prev.cols];
                for r in 0..prev.rows {
                    let dr = delta[r];
                    for c in 0..prev.cols {
                        next_delta[c] += prev.w[r * prev.cols + c] * dr;
                    }
                }
                // through tanh of the previous layer
                for (c, nd) in next_delta.iter_mut().enumerate() {
                    let a = ws.act[li - 1][c];
                    *nd *= 1.0 - a * a;
                }
                delta = next_delta;
            }
        }
        0.5 * err * err
    }

    /// Trains on raw (unstandardized) data.
    pub fn fit(x: &[Vec<f64>], y: &[f64], config: MlpConfig) -> Result<Self, SurrogateError> {
        let n = x.len();
        if n < 2 || n != y.len() {
            return Err(SurrogateError::TooFewRows(n, 2));
        }
        let d = x[0].len();
        let cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let x_std = Standardizer::fit_tolerant(&cols);
        // constant targets are a legal edge case: pin the scale to 1
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let y_var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / n as f64;
        let y_std = if y_var > 0.0 {
            Standardizer::fit(&[y.to_vec()])?
        } else {
            Standardizer {
                mean: vec![y_mean],
                std: vec![1.0],
            }
        };

        let xs: Vec<Vec<f64>> = x.iter().map(|r| x_std.transform(r)).collect();
        let ys: Vec<f64> = y.iter().map(|&v| y_std.transform_scalar(v)).collect();

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut dims = vec![d];
        dims.extend(&config.hidden);
        dims.push(1);
        let mut model = Self {
            layers: Self::init_layers(&dims, &mut rng),
            x_std,
            y_std,
            config: config.clone(),
            loss_history: Vec::new(),
        };

        let mut ws = Workspace {
            pre: Vec::new(),
            act: Vec::new(),
        };
        let mut velocity: Vec<Vec<f64>> = model
            .layers
            .iter()
            .map(|l| vec![0.0; l.rows * l.cols + l.rows])
            .collect();
        let mut grads = velocity.clone();
        let mut order: Vec<usize> = (0..n).collect();
        let mut lr = config.learning_rate;
        let mut best_loss = f64::INFINITY;
        let mut since_improved = 0usize;
        let batch = config.batch_size.max(1).min(n);

        for _epoch in 0..config.epochs {
            order.shuffle(&mut rng);
            let mut epoch_loss = 0.0;
            for chunk in order.chunks(batch) {
                for g in &mut grads {
                    g.iter_mut().for_each(|v| *v = 0.0);
                }
                for &i in chunk {
                    epoch_loss += model.accumulate_grads(&xs[i], ys[i], &mut ws, &mut grads);
                }
                let scale = 1.0 / chunk.len() as f64;
                for (li, layer) in model.layers.iter_mut().enumerate() {
                    let nw = layer.rows * layer.cols;
                    let (g, v) = (&grads[li], &mut velocity[li]);
                    for k in 0..nw {
                        v[k] = config.momentum * v[k] - lr * g[k] * scale;
                        layer.w[k] += v[k];
                    }
                    for k in 0..layer.rows {
                        v[nw + k] = config.momentum * v[nw + k] - lr * g[nw + k] * scale;
                        layer.b[k] += v[nw + k];
                    }
                }
            }
            epoch_loss /= n as f64;
            if !epoch_loss.is_finite() {
                return Err(SurrogateError::Diverged {
                    seed: config.seed,
                    epoch: model.loss_history.len(),
                });
            }
            model.loss_history.push(epoch_loss);
            if epoch_loss < best_loss * (1.0 - config.min_relative_improvement) {
                best_loss = epoch_loss;
                since_improved = 0;
            } else {
                since_improved += 1;
                if since_improved >= config.plateau_patience {
                    lr *= 0.5;
                    since_improved = 0;
                }
            }
        }
        Ok(model)
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let xs = self.x_std.transform(x);
        let mut ws = Workspace {
            pre: Vec::new(),
            act: Vec::new(),
        };
        let out = self.forward_std(&xs, &mut ws);
        self.y_std.inverse_scalar(out)
    }

    /// Flattened parameters, for the gradient check.
    #[doc(hidden)]
    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::new();
        for l in &self.layers {
            p.extend(&l.w);
            p.extend(&l.b);
        }
        p
    }

    #[doc(hidden)]
    pub fn set_params(&mut self, p: &[f64]) {
        let mut k = 0;
        for l in &mut self.layers {
            for w in &mut l.w {
                *w = p[k];
                k += 1;
            }
            for b in &mut l.b {
                *b = p[k];
                k += 1;
            }
        }
        assert_eq!(k, p.len());
    }

    /// Loss and flat analytic gradient at the current parameters for one
    /// standardized sample, exposed for the finite-difference check.
    #[doc(hidden)]
    pub fn loss_and_grad_std(&self, x_std: &[f64], y_std: f64) -> (f64, Vec<f64>) {
        let mut ws = Workspace {
            pre: Vec::new(),
            act: Vec::new(),
        };
        let mut grads: Vec<Vec<f64>> = self
            .layers
            .iter()
            .map(|l| vec![0.0; l.rows * l.cols + l.rows])
            .collect();
        let loss = self.accumulate_grads(x_std, y_std, &mut ws, &mut grads);
        let mut flat = Vec::new();
        for (l, g) in self.layers.iter().zip(&grads) {
            let nw = l.rows * l.cols;
            flat.extend(&g[..nw]);
            flat.extend(&g[nw..]);
        }
        (loss, flat)
    }

    #[doc(hidden)]
    pub fn loss_at_std(&self, x_std: &[f64], y_std: f64) -> f64 {
        let mut ws = Workspace {
            pre: Vec::new(),
            act: Vec::new(),
        };
        let pred = self.forward_std(x_std, &mut ws);
        0.5 * (pred - y_std).powi(2)
    }
}
