//! Design-of-experiments draws over the unit design cube.

use crate::config::SamplingMethod;
use rand::seq::SliceRandom;
use rand::Rng;

/// Draws `n` unit-cube points, either plain uniform or Latin-hypercube
/// (one stratum per sample and dimension, shuffled independently).
pub fn unit_samples<R: Rng>(method: SamplingMethod, n: usize, rng: &mut R) -> Vec<[f64; 7]> {
    match method {
        SamplingMethod::Uniform => (0..n)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0.0..1.0)))
            .collect(),
        SamplingMethod::LatinHypercube => {
            let mut columns: Vec<Vec<f64>> = Vec::with_capacity(7);
            for _ in 0..7 {
                let mut strata: Vec<usize> = (0..n).collect();
                strata.shuffle(rng);
                columns.push(
                    strata
                        .into_iter()
                        .map(|s| (s as f64 + rng.gen_range(0.0..1.0)) / n as f64)
                        .collect(),
                );
            }
            (0..n)
                .map(|i| std::array::from_fn(|d| columns[d][i]))
                .collect()
        }
    }
}
