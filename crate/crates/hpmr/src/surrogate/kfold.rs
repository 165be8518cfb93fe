//! k-fold cross-validation of the two-stage predictor.

use super::dataset::Dataset;
use super::two_stage::{TwoStageConfig, TwoStagePredictor};
use super::SurrogateError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Coefficient of determination 1 - SS_res/SS_tot.
pub fn r_squared(predictions: &[f64], truth: &[f64]) -> Result<f64, SurrogateError> {
    let n = truth.len() as f64;
    let mean = truth.iter().sum::<f64>() / n;
    let ss_tot: f64 = truth.iter().map(|v| (v - mean).powi(2)).sum();
    if ss_tot <= 0.0 {
        return Err(SurrogateError::DegenerateTarget);
    }
    let ss_res: f64 = predictions
        .iter()
        .zip(truth)
        .map(|(p, t)| (p - t).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Deterministic fold assignment: a seeded shuffle split into k contiguous
/// chunks. Every row lands in exactly one validation fold.
pub fn fold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, SurrogateError> {
    if k < 2 {
        return Err(SurrogateError::BadFoldCount(k));
    }
    if n < k {
        return Err(SurrogateError::TooFewRows(n, k));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::new(); k];
    for (i, idx) in order.into_iter().enumerate() {
        folds[i % k].push(idx);
    }
    Ok(folds)
}

/// Per-target cross-validated R^2, averaged over folds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CvReport {
    pub lifetime: f64,
    pub sdm: f64,
    pub f_delta_h: f64,
    pub q_max: f64,
    pub folds: usize,
}

impl CvReport {
    pub fn stage1_min(&self) -> f64 {
        self.lifetime.min(self.sdm).min(self.f_delta_h)
    }
}

/// Fits the two-stage predictor on k-1 folds and scores the held-out fold,
/// averaging R^2 per target across folds. The held-out predictions run the
/// full inference path (stage 2 sees stage-1 predictions).
pub fn kfold_r2(
    config: &TwoStageConfig,
    dataset: &Dataset,
    k: usize,
    seed: u64,
) -> Result<CvReport, SurrogateError> {
    let folds = fold_indices(dataset.len(), k, seed)?;
    let mut sums = [0.0f64; 4];
    for fold in &folds {
        let held: Vec<bool> = {
            let mut mask = vec![false; dataset.len()];
            for &i in fold {
                mask[i] = true;
            }
            mask
        };
        let train = Dataset {
            rows: dataset
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| !held[*i])
                .map(|(_, r)| r.clone())
                .collect(),
        };
        let predictor = TwoStagePredictor::fit(&train, config)?;

        let mut preds = [const { Vec::new() }; 4];
        let mut truths = [const { Vec::new() }; 4];
        for &i in fold {
            let row = &dataset.rows[i];
            let p = predictor.predict(&row.design);
            for (slot, (pv, tv)) in [
                (p.lifetime_years, row.qois.lifetime_years),
                (p.sdm_pcm, row.qois.sdm_pcm),
                (p.f_delta_h, row.qois.f_delta_h),
                (p.q_max_mw_m2, row.qois.q_max_mw_m2),
            ]
            .into_iter()
            .enumerate()
            {
                preds[slot].push(pv);
                truths[slot].push(tv);
            }
        }
        for t in 0..4 {
            sums[t] += r_squared(&preds[t], &truths[t])?;
        }
    }
    let kf = k as f64;
    Ok(CvReport {
        lifetime: sums[0] / kf,
        sdm: sums[1] / kf,
        f_delta_h: sums[2] / kf,
        q_max: sums[3] / kf,
        folds: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_predictor_scores_one() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        assert!((r_squared(&y, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_predictor_scores_zero() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let mean = vec![2.5; 4];
        assert!(r_squared(&mean, &y).unwrap().abs() < 1e-12);
    }

    #[test]
    fn constant_truth_is_degenerate() {
        assert!(matches!(
            r_squared(&[1.0, 2.0], &[3.0, 3.0]),
            Err(SurrogateError::DegenerateTarget)
        ));
    }

    #[test]
    fn r2_invariant_under_affine_transform() {
        let y = vec![1.0, 5.0, 2.0, 8.0, -1.0];
        let p = vec![1.2, 4.4, 2.5, 7.0, 0.1];
        let base = r_squared(&p, &y).unwrap();
        let (a, b) = (3.7, -11.0);
        let y2: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        let p2: Vec<f64> = p.iter().map(|v| a * v + b).collect();
        assert!((r_squared(&p2, &y2).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn folds_require_k_at_least_two() {
        assert!(matches!(
            fold_indices(10, 1, 0),
            Err(SurrogateError::BadFoldCount(1))
        ));
        assert!(fold_indices(3, 5, 0).is_err());
    }

    #[test]
    fn same_seed_reproduces_folds() {
        assert_eq!(fold_indices(97, 5, 9).unwrap(), fold_indices(97, 5, 9).unwrap());
        assert_ne!(fold_indices(97, 5, 9).unwrap(), fold_indices(97, 5, 10).unwrap());
    }

    proptest! {
        #[test]
        fn folds_partition_rows(n in 10usize..200, k in 2usize..8, seed in 0u64..1000) {
            prop_assume!(n >= k);
            let folds = fold_indices(n, k, seed).unwrap();
            let mut seen = vec![0usize; n];
            for fold in &folds {
                for &i in fold {
                    seen[i] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
