//! Uniform random-search baseline under the same reward.

use super::train::{Champion, EpochStats, TrainingTrace};
use super::{reward, ConstraintSpec, ObjectiveEvaluator, RlError};
use crate::design::denormalize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct RandomSearchResult {
    /// Best sample by reward.
    pub best: Option<Champion>,
    /// FOAK LCOE of every feasible sample, in draw order.
    pub feasible_lcoes: Vec<f64>,
    pub trace: TrainingTrace,
    pub samples_used: usize,
}

impl RandomSearchResult {
    pub fn feasible_mean_lcoe(&self) -> Option<f64> {
        if self.feasible_lcoes.is_empty() {
            None
        } else {
            Some(self.feasible_lcoes.iter().sum::<f64>() / self.feasible_lcoes.len() as f64)
        }
    }
}

/// Samples the bounds uniformly for `budget` evaluations, scoring with the
/// same penalty-augmented reward. Deterministic per seed.
pub fn random_search_baseline(
    evaluator: &dyn ObjectiveEvaluator,
    spec: &ConstraintSpec,
    budget: usize,
    seed: u64,
    epoch_samples: usize,
) -> Result<RandomSearchResult, RlError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<Champion> = None;
    let mut feasible_lcoes = Vec::new();
    let mut rewards = Vec::new();
    let mut feasible_in_epoch = 0usize;
    let mut best_lcoe: Option<f64> = None;
    let mut epochs = Vec::new();
    let chunk = epoch_samples.max(1);

    for i in 0..budget {
        let unit: [f64; 7] = std::array::from_fn(|_| rng.gen_range(0.0..=1.0));
        let design = denormalize(&unit);
        let outcome = evaluator.evaluate(&design)?;
        let r = reward(&outcome, spec);
        let feasible = spec.feasible(&outcome.values);
        rewards.push(r);
        if feasible {
            feasible_in_epoch += 1;
            if let Some(l) = outcome.lcoe_foak {
                feasible_lcoes.push(l);
                best_lcoe = Some(best_lcoe.map_or(l, |b: f64| b.min(l)));
            }
        }
        if best.as_ref().map_or(true, |b| r > b.reward) {
            best = Some(Champion {
                design,
                outcome,
                reward: r,
            });
        }
        if rewards.len() == chunk || i + 1 == budget {
            let n = rewards.len() as f64;
            let mean = rewards.iter().sum::<f64>() / n;
            let var = rewards.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            epochs.push(EpochStats {
                epoch: epochs.len() + 1,
                mean_reward: mean,
                max_reward: rewards.iter().cloned().fold(f64::MIN, f64::max),
                best_lcoe,
                feasible_fraction: feasible_in_epoch as f64 / n,
                reward_variance: var,
            });
            rewards.clear();
            feasible_in_epoch = 0;
        }
    }

    Ok(RandomSearchResult {
        best,
        feasible_lcoes,
        trace: TrainingTrace { epochs },
        samples_used: budget,
    })
}
