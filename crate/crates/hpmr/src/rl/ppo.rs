//! The clipped-objective policy update.

use super::policy::{sigmoid, PolicyState, ACTION_DIM};
use super::RlError;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Parameter vector layout: mean_raw | log_std | value.
pub const PARAM_DIM: usize = 2 * ACTION_DIM + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Adam,
    Sgd,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct PpoConfig {
    /// Single-step episodes collected per worker per rollout.
    pub n_steps: usize,
    /// Clip range epsilon.
    pub clip: f64,
    /// Value-loss coefficient.
    pub c_vf: f64,
    /// Entropy coefficient.
    pub c_h: f64,
    pub learning_rate: f64,
    pub max_grad_norm: f64,
    /// Minibatch size as a fraction of the rollout buffer.
    pub batch_fraction: f64,
    /// Passes over the rollout buffer per update.
    pub update_epochs: usize,
    pub normalize_advantages: bool,
    pub optimizer: OptimizerKind,
    /// Initial policy standard deviation.
    pub sigma_init: f64,
    pub log_std_min: f64,
    pub log_std_max: f64,
    /// Discount and GAE lambda; irrelevant for single-step episodes but kept
    /// configurable.
    pub gamma: f64,
    pub lambda: f64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            n_steps: 8,
            clip: 0.2,
            c_vf: 0.5,
            c_h: 0.0001,
            learning_rate: 0.00025,
            max_grad_norm: 0.5,
            batch_fraction: 0.5,
            update_epochs: 10,
            normalize_advantages: true,
            optimizer: OptimizerKind::Adam,
            sigma_init: 0.5,
            log_std_min: -4.0,
            log_std_max: 0.5,
            gamma: 0.99,
            lambda: 0.95,
        }
    }
}

/// One rollout entry: the raw action, its log probability under the policy
/// that drew it, the advantage, and the value target.
#[derive(Debug, Clone, Copy)]
pub struct RolloutSample {
    pub raw_action: [f64; ACTION_DIM],
    pub old_log_prob: f64,
    pub advantage: f64,
    pub value_target: f64,
}

/// The pointwise clipped surrogate: min(r*A, clip(r, 1-eps, 1+eps)*A).
pub fn clipped_surrogate(ratio: f64, advantage: f64, epsilon: f64) -> f64 {
    let clipped = ratio.clamp(1.0 - epsilon, 1.0 + epsilon);
    (ratio * advantage).min(clipped * advantage)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LossDiagnostics {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizerState {
    m: [f64; PARAM_DIM],
    v: [f64; PARAM_DIM],
    t: u64,
}

impl OptimizerState {
    pub fn new() -> Self {
        Self {
            m: [0.0; PARAM_DIM],
            v: [0.0; PARAM_DIM],
            t: 0,
        }
    }

    fn step(&mut self, kind: OptimizerKind, lr: f64, params: &mut [f64; PARAM_DIM], grad: &[f64; PARAM_DIM]) {
        match kind {
            OptimizerKind::Sgd => {
                for (p, g) in params.iter_mut().zip(grad) {
                    *p -= lr * g;
                }
            }
            OptimizerKind::Adam => {
                const B1: f64 = 0.9;
                const B2: f64 = 0.999;
                const EPS: f64 = 1e-8;
                self.t += 1;
                let bc1 = 1.0 - B1.powi(self.t as i32);
                let bc2 = 1.0 - B2.powi(self.t as i32);
                for i in 0..PARAM_DIM {
                    self.m[i] = B1 * self.m[i] + (1.0 - B1) * grad[i];
                    self.v[i] = B2 * self.v[i] + (1.0 - B2) * grad[i] * grad[i];
                    let mhat = self.m[i] / bc1;
                    let vhat = self.v[i] / bc2;
                    params[i] -= lr * mhat / (vhat.sqrt() + EPS);
                }
            }
        }
    }
}

impl Default for OptimizerState {
    fn default() -> Self {
        Self::new()
    }
}

fn pack(policy: &PolicyState) -> [f64; PARAM_DIM] {
    let mut p = [0.0; PARAM_DIM];
    p[..ACTION_DIM].copy_from_slice(&policy.mean_raw);
    p[ACTION_DIM..2 * ACTION_DIM].copy_from_slice(&policy.log_std);
    p[PARAM_DIM - 1] = policy.value;
    p
}

fn unpack(params: &[f64; PARAM_DIM], policy: &mut PolicyState) {
    policy.mean_raw.copy_from_slice(&params[..ACTION_DIM]);
    policy.log_std.copy_from_slice(&params[ACTION_DIM..2 * ACTION_DIM]);
    policy.value = params[PARAM_DIM - 1];
}

/// Gradient of the total loss over one minibatch at the given parameters.
/// Loss = -mean(min(r A, clip(r) A)) + c_vf * mean((V - ret)^2) - c_h * H.
fn minibatch_grad(
    params: &[f64; PARAM_DIM],
    batch: &[RolloutSample],
    idx: &[usize],
    cfg: &PpoConfig,
    diag: &mut LossDiagnostics,
) -> [f64; PARAM_DIM] {
    let m = idx.len() as f64;
    let mean: [f64; ACTION_DIM] = std::array::from_fn(|i| sigmoid(params[i]));
    let log_std = &params[ACTION_DIM..2 * ACTION_DIM];
    let value = params[PARAM_DIM - 1];
    let mut grad = [0.0; PARAM_DIM];

    // advantage normalization within the minibatch
    let (a_mean, a_std) = if cfg.normalize_advantages && idx.len() > 1 {
        let am = idx.iter().map(|&i| batch[i].advantage).sum::<f64>() / m;
        let av = idx
            .iter()
            .map(|&i| (batch[i].advantage - am).powi(2))
            .sum::<f64>()
            / m;
        (am, av.sqrt().max(1e-8))
    } else {
        (0.0, 1.0)
    };

    const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;
    for &i in idx {
        let s = &batch[i];
        let adv = (s.advantage - a_mean) / a_std;

        let mut lp_new = 0.0;
        let mut z = [0.0; ACTION_DIM];
        for d in 0..ACTION_DIM {
            let sigma = log_std[d].exp();
            z[d] = (s.raw_action[d] - mean[d]) / sigma;
            lp_new += -0.5 * z[d] * z[d] - log_std[d] - HALF_LN_2PI;
        }
        let ratio = (lp_new - s.old_log_prob).exp();
        let surrogate = clipped_surrogate(ratio, adv, cfg.clip);
        diag.policy_loss -= surrogate;
        diag.approx_kl += s.old_log_prob - lp_new;

        let clipped_away =
            (adv >= 0.0 && ratio > 1.0 + cfg.clip) || (adv <= 0.0 && ratio < 1.0 - cfg.clip);
        if clipped_away {
            diag.clip_fraction += 1.0;
        } else {
            // d(-r A)/d theta = -A r d(lp_new)/d theta
            let coeff = -adv * ratio / m;
            for d in 0..ACTION_DIM {
                let sigma = log_std[d].exp();
                let dmu = mean[d] * (1.0 - mean[d]); // sigmoid'
                grad[d] += coeff * (z[d] / sigma) * dmu;
                grad[ACTION_DIM + d] += coeff * (z[d] * z[d] - 1.0);
            }
        }

        // value loss c_vf (V - ret)^2
        let verr = value - s.value_target;
        diag.value_loss += cfg.c_vf * verr * verr;
        grad[PARAM_DIM - 1] += 2.0 * cfg.c_vf * verr / m;
    }

    // entropy bonus: H = sum(log_std) + const, so -c_h dH/dlog_std = -c_h
    for d in 0..ACTION_DIM {
        grad[ACTION_DIM + d] -= cfg.c_h;
    }
    grad
}

/// Runs the configured number of epochs of minibatch updates over one
/// rollout buffer. Returns aggregate loss diagnostics.
pub fn ppo_update<R: Rng>(
    policy: &mut PolicyState,
    opt: &mut OptimizerState,
    batch: &[RolloutSample],
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<LossDiagnostics, RlError> {
    if batch.is_empty() {
        return Ok(LossDiagnostics::default());
    }
    let mb = ((batch.len() as f64 * cfg.batch_fraction).round() as usize)
        .clamp(1, batch.len());
    let mut order: Vec<usize> = (0..batch.len()).collect();
    let mut diag = LossDiagnostics::default();
    let mut minibatches = 0usize;
    let mut samples_seen = 0usize;

    for _ in 0..cfg.update_epochs {
        order.shuffle(rng);
        for chunk in order.chunks(mb) {
            let mut params = pack(policy);
            let mut grad = minibatch_grad(&params, batch, chunk, cfg, &mut diag);
            minibatches += 1;
            samples_seen += chunk.len();

            let norm: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if !norm.is_finite() {
                return Err(RlError::NonFiniteLoss {
                    step: policy.step,
                    detail: format!("gradient norm {norm} over {} samples", chunk.len()),
                });
            }
            if norm > cfg.max_grad_norm {
                let scale = cfg.max_grad_norm / norm;
                grad.iter_mut().for_each(|g| *g *= scale);
            }
            opt.step(cfg.optimizer, cfg.learning_rate, &mut params, &grad);
            for d in 0..ACTION_DIM {
                params[ACTION_DIM + d] = params[ACTION_DIM + d].clamp(cfg.log_std_min, cfg.log_std_max);
            }
            unpack(&params, policy);
        }
    }
    policy.step += 1;

    let n = samples_seen.max(1) as f64;
    diag.policy_loss /= n;
    diag.value_loss /= n;
    diag.approx_kl /= n;
    diag.clip_fraction /= n;
    diag.entropy = policy.entropy();
    let _ = minibatches;
    if !(diag.policy_loss.is_finite() && diag.value_loss.is_finite()) {
        return Err(RlError::NonFiniteLoss {
            step: policy.step,
            detail: format!("{diag:?}"),
        });
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn clip_point_cases() {
        // r = 1.3, A = 1, eps = 0.2 -> min(1.3, 1.2) = 1.2
        assert!((clipped_surrogate(1.3, 1.0, 0.2) - 1.2).abs() < 1e-12);
        // r = 0.5, A = -1, eps = 0.2 -> min(-0.5, -0.8) = -0.8
        assert!((clipped_surrogate(0.5, -1.0, 0.2) - (-0.8)).abs() < 1e-12);
    }

    #[test]
    fn unit_ratio_makes_clip_inactive() {
        for a in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            assert_eq!(clipped_surrogate(1.0, a, 0.2), a);
        }
    }

    #[test]
    fn min_structure_bounds_the_surrogate_by_both_branches() {
        let eps = 0.2;
        for r in [0.2, 0.8, 1.0, 1.3, 2.5] {
            for a in [1.5, -1.5] {
                let s = clipped_surrogate(r, a, eps);
                assert!(s <= r * a + 1e-15, "r={r} a={a}");
                assert!(s <= r.clamp(1.0 - eps, 1.0 + eps) * a + 1e-15, "r={r} a={a}");
            }
            // inside the trust region both branches agree
            if (1.0 - eps..=1.0 + eps).contains(&r) {
                assert_eq!(clipped_surrogate(r, 1.5, eps), r * 1.5);
            }
        }
    }

    fn synthetic_batch(policy: &PolicyState, n: usize, seed: u64) -> Vec<RolloutSample> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        super::super::policy::sample_actions(policy, n, &mut rng)
            .into_iter()
            .enumerate()
            .map(|(i, s)| RolloutSample {
                raw_action: s.raw,
                old_log_prob: s.log_prob,
                advantage: (i as f64) - n as f64 / 2.0,
                value_target: -500.0 - i as f64,
            })
            .collect()
    }

    /// Independent vanilla policy-gradient oracle: one full-batch SGD step on
    /// -mean(A log pi) + c_vf mean((V-ret)^2), gradients written out by hand.
    fn vanilla_pg_step(policy: &PolicyState, batch: &[RolloutSample], lr: f64, c_vf: f64) -> PolicyState {
        let mut out = *policy;
        let m = batch.len() as f64;
        let mean = policy.mean();
        let mut g_mean = [0.0; ACTION_DIM];
        let mut g_std = [0.0; ACTION_DIM];
        let mut g_v = 0.0;
        for s in batch {
            for d in 0..ACTION_DIM {
                let sigma = policy.log_std[d].exp();
                let z = (s.raw_action[d] - mean[d]) / sigma;
                let dmu = mean[d] * (1.0 - mean[d]);
                g_mean[d] += -s.advantage * (z / sigma) * dmu / m;
                g_std[d] += -s.advantage * (z * z - 1.0) / m;
            }
            g_v += 2.0 * c_vf * (policy.value - s.value_target) / m;
        }
        for d in 0..ACTION_DIM {
            out.mean_raw[d] -= lr * g_mean[d];
            out.log_std[d] -= lr * g_std[d];
        }
        out.value -= lr * g_v;
        out
    }

    #[test]
    fn infinite_clip_single_epoch_equals_vanilla_policy_gradient() {
        let mut policy = PolicyState::new(0.25);
        policy.mean_raw = [0.1, -0.2, 0.3, 0.0, 0.05, -0.1, 0.2];
        let batch = synthetic_batch(&policy, 64, 3);

        let cfg = PpoConfig {
            clip: 1e12,
            c_h: 0.0,
            update_epochs: 1,
            batch_fraction: 1.0,
            normalize_advantages: false,
            optimizer: OptimizerKind::Sgd,
            max_grad_norm: 1e12,
            learning_rate: 1e-4,
            ..PpoConfig::default()
        };
        let oracle = vanilla_pg_step(&policy, &batch, cfg.learning_rate, cfg.c_vf);

        let mut updated = policy;
        let mut opt = OptimizerState::new();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        ppo_update(&mut updated, &mut opt, &batch, &cfg, &mut rng).unwrap();

        for d in 0..ACTION_DIM {
            assert!(
                (updated.mean_raw[d] - oracle.mean_raw[d]).abs() < 1e-8,
                "mean[{d}]: {} vs {}",
                updated.mean_raw[d],
                oracle.mean_raw[d]
            );
            assert!((updated.log_std[d] - oracle.log_std[d]).abs() < 1e-8);
        }
        assert!((updated.value - oracle.value).abs() < 1e-8);
    }

    #[test]
    fn update_moves_mean_toward_high_advantage_actions() {
        let mut policy = PolicyState::new(0.25);
        // advantages favor actions above the mean in dim 0
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let samples = super::super::policy::sample_actions(&policy, 256, &mut rng);
        let batch: Vec<RolloutSample> = samples
            .iter()
            .map(|s| RolloutSample {
                raw_action: s.raw,
                old_log_prob: s.log_prob,
                advantage: s.raw[0] - 0.5,
                value_target: 0.0,
            })
            .collect();
        let before = policy.mean()[0];
        let cfg = PpoConfig {
            learning_rate: 0.01,
            update_epochs: 4,
            ..PpoConfig::default()
        };
        let mut opt = OptimizerState::new();
        ppo_update(&mut policy, &mut opt, &batch, &cfg, &mut rng).unwrap();
        assert!(policy.mean()[0] > before);
    }

    #[test]
    fn update_is_deterministic_given_seed() {
        let policy0 = PolicyState::new(0.25);
        let batch = synthetic_batch(&policy0, 64, 11);
        let cfg = PpoConfig::default();
        let run = || {
            let mut p = policy0;
            let mut opt = OptimizerState::new();
            let mut rng = ChaCha20Rng::seed_from_u64(42);
            ppo_update(&mut p, &mut opt, &batch, &cfg, &mut rng).unwrap();
            p
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn log_std_respects_bounds() {
        let mut policy = PolicyState::new(0.25);
        let batch = synthetic_batch(&policy, 32, 2);
        let cfg = PpoConfig {
            learning_rate: 10.0, // absurd rate to slam the bounds
            ..PpoConfig::default()
        };
        let mut opt = OptimizerState::new();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..20 {
            let _ = ppo_update(&mut policy, &mut opt, &batch, &cfg, &mut rng);
        }
        for d in 0..ACTION_DIM {
            assert!(policy.log_std[d] >= cfg.log_std_min - 1e-12);
            assert!(policy.log_std[d] <= cfg.log_std_max + 1e-12);
        }
    }
}
