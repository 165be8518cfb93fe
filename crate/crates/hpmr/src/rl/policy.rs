//! Diagonal-Gaussian policy over the unit design cube.
//!
//! The action mean is a sigmoid of free parameters so it stays in (0,1)^7;
//! samples are clipped to [0,1] before denormalization while log
//! probabilities are recorded for the pre-clip draw. With a fixed context
//! (contextual bandit), the value function is a single learned scalar.

use crate::design::{denormalize, DesignPoint};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const ACTION_DIM: usize = 7;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    /// Pre-sigmoid mean parameters.
    pub mean_raw: [f64; ACTION_DIM],
    pub log_std: [f64; ACTION_DIM],
    /// Scalar state value for the fixed context.
    pub value: f64,
    /// Update counter.
    pub step: u64,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl PolicyState {
    pub fn new(sigma_init: f64) -> Self {
        Self {
            mean_raw: [0.0; ACTION_DIM],
            log_std: [sigma_init.ln(); ACTION_DIM],
            value: 0.0,
            step: 0,
        }
    }

    /// Action mean in (0,1)^7.
    pub fn mean(&self) -> [f64; ACTION_DIM] {
        std::array::from_fn(|i| sigmoid(self.mean_raw[i]))
    }

    pub fn std(&self) -> [f64; ACTION_DIM] {
        std::array::from_fn(|i| self.log_std[i].exp())
    }

    /// Log density of a pre-clip action under the policy.
    pub fn log_prob(&self, action: &[f64; ACTION_DIM]) -> f64 {
        let mean = self.mean();
        let mut lp = 0.0;
        for i in 0..ACTION_DIM {
            let sigma = self.log_std[i].exp();
            let z = (action[i] - mean[i]) / sigma;
            lp += -0.5 * z * z - self.log_std[i] - HALF_LN_2PI;
        }
        lp
    }

    /// Differential entropy of the diagonal Gaussian.
    pub fn entropy(&self) -> f64 {
        self.log_std
            .iter()
            .map(|ls| ls + 0.5 + HALF_LN_2PI)
            .sum()
    }
}

/// One drawn action with its design and pre-clip log probability.
#[derive(Debug, Clone, Copy)]
pub struct ActionSample {
    /// Raw Gaussian draw, kept for the likelihood-ratio term.
    pub raw: [f64; ACTION_DIM],
    /// Clipped to the unit cube.
    pub unit: [f64; ACTION_DIM],
    pub design: DesignPoint,
    pub log_prob: f64,
}

/// Draws `n` actions; samples are clipped to [0,1]^7 and denormalized, with
/// the log probability recorded before clipping. Deterministic given the RNG
/// state.
pub fn sample_actions<R: Rng>(policy: &PolicyState, n: usize, rng: &mut R) -> Vec<ActionSample> {
    let mean = policy.mean();
    let std = policy.std();
    (0..n)
        .map(|_| {
            let mut raw = [0.0; ACTION_DIM];
            for i in 0..ACTION_DIM {
                // Box-Muller from two uniform draws
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                raw[i] = mean[i] + std[i] * z;
            }
            let unit = raw.map(|v| v.clamp(0.0, 1.0));
            ActionSample {
                raw,
                unit,
                design: denormalize(&unit),
                log_prob: policy.log_prob(&raw),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn zero_stddev_limit_collapses_to_the_mean() {
        let mut p = PolicyState::new(1e-12);
        p.mean_raw = [0.3, -0.4, 0.0, 1.0, -1.0, 0.2, 0.7];
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let mean = p.mean();
        for s in sample_actions(&p, 50, &mut rng) {
            for i in 0..ACTION_DIM {
                assert!((s.unit[i] - mean[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn same_seed_gives_identical_batches() {
        let p = PolicyState::new(0.25);
        let a = sample_actions(&p, 64, &mut ChaCha20Rng::seed_from_u64(9));
        let b = sample_actions(&p, 64, &mut ChaCha20Rng::seed_from_u64(9));
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.raw, y.raw);
            assert_eq!(x.log_prob, y.log_prob);
            assert_eq!(x.design, y.design);
        }
    }

    #[test]
    fn sample_mean_within_three_standard_errors() {
        let p = PolicyState::new(0.1); // interior mean, narrow spread
        let n = 10_000;
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let samples = sample_actions(&p, n, &mut rng);
        let mean = p.mean();
        let se = 0.1 / (n as f64).sqrt();
        for i in 0..ACTION_DIM {
            let emp: f64 = samples.iter().map(|s| s.raw[i]).sum::<f64>() / n as f64;
            assert!(
                (emp - mean[i]).abs() < 3.0 * se,
                "dim {i}: {emp} vs {} (se {se})",
                mean[i]
            );
        }
    }

    #[test]
    fn log_prob_matches_gaussian_density() {
        let mut p = PolicyState::new(0.5);
        p.mean_raw = [0.0; 7];
        // at the mean: each dim contributes -ln(sigma) - 0.5 ln(2 pi)
        let at_mean = p.log_prob(&p.mean());
        let expect = 7.0 * (-(0.5f64.ln()) - HALF_LN_2PI);
        assert!((at_mean - expect).abs() < 1e-12);
    }

    #[test]
    fn entropy_monotone_in_each_log_std() {
        let p = PolicyState::new(0.25);
        let base = p.entropy();
        for i in 0..ACTION_DIM {
            let mut bigger = p;
            bigger.log_std[i] += 0.1;
            assert!(bigger.entropy() > base);
        }
    }

    #[test]
    fn sampled_designs_are_always_valid() {
        let mut p = PolicyState::new(0.8); // wide: lots of clipping
        p.mean_raw = [2.0, -2.0, 0.0, 0.0, 2.0, -2.0, 0.0];
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        for s in sample_actions(&p, 200, &mut rng) {
            assert!(crate::design::validate(s.design).is_ok());
            assert!(s.unit.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
