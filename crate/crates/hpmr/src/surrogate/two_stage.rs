//! Two-stage predictor: GP regression for lifetime, shutdown margin, and
//! F_dh from the design inputs, then an MLP for peak heat flux over the
//! design features augmented with the stage-1 predictions.

use super::dataset::Dataset;
use super::gp::{GpModel, GpSearchConfig};
use super::mlp::{Mlp, MlpConfig};
use super::rf::{rf_feature_importance, select_top, RfConfig};
use super::SurrogateError;
use crate::design::DesignPoint;
use serde::{Deserialize, Serialize};

/// QoI indices (into `DatasetRow::qoi_array`) predicted by stage 1.
pub const STAGE1_TARGETS: [usize; 3] = [0, 1, 3]; // lifetime, sdm, fdh
/// QoI index predicted by stage 2.
pub const STAGE2_TARGET: usize = 5; // qmax

/// Up to this many inputs feed each stage.
pub const MAX_SELECTED_INPUTS: usize = 8;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct TwoStageConfig {
    pub rf: RfConfig,
    pub gp: GpSearchConfig,
    pub mlp: MlpConfig,
}

/// Predictions for the four surrogate targets, natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateQoIs {
    pub lifetime_years: f64,
    pub sdm_pcm: f64,
    pub f_delta_h: f64,
    pub q_max_mw_m2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoStagePredictor {
    /// Design-feature indices feeding stage 1: min(8, 7) = all seven.
    pub stage1_features: Vec<usize>,
    /// Design-feature indices feeding stage 2 alongside the three stage-1
    /// predictions, so the stage-2 input stays at eight.
    pub stage2_design_features: Vec<usize>,
    gp_lifetime: GpModel,
    gp_sdm: GpModel,
    gp_fdh: GpModel,
    mlp_qmax: Mlp,
}

fn subset(row: &[f64; 7], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| row[i]).collect()
}

impl TwoStagePredictor {
    /// Fits both stages. Stage-2 training inputs use the true stage-1 QoIs;
    /// inference substitutes the stage-1 predictions.
    pub fn fit(dataset: &Dataset, config: &TwoStageConfig) -> Result<Self, SurrogateError> {
        let designs = dataset.design_matrix();
        let n = designs.len();
        if n < 50 {
            return Err(SurrogateError::TooFewRows(n, 50));
        }

        // stage 1: rank the 7 design features against the first target and
        // keep min(8, available)
        let x_full: Vec<Vec<f64>> = designs.iter().map(|d| d.to_vec()).collect();
        let lifetime = dataset.qoi_column(STAGE1_TARGETS[0]);
        let ranked = rf_feature_importance(&x_full, &lifetime, &config.rf)?;
        let mut stage1_features = select_top(&ranked, MAX_SELECTED_INPUTS.min(ranked.len()));
        stage1_features.sort_unstable();

        let x1: Vec<Vec<f64>> = designs
            .iter()
            .map(|d| subset(d, &stage1_features))
            .collect();
        let gp_lifetime = GpModel::fit(&x1, &lifetime, &config.gp)?;
        let gp_sdm = GpModel::fit(&x1, &dataset.qoi_column(STAGE1_TARGETS[1]), &config.gp)?;
        let gp_fdh = GpModel::fit(&x1, &dataset.qoi_column(STAGE1_TARGETS[2]), &config.gp)?;

        // stage 2: the three true stage-1 QoIs always ride along, so pick the
        // best five design features to stay at eight inputs total
        let qmax = dataset.qoi_column(STAGE2_TARGET);
        let ranked2 = rf_feature_importance(&x_full, &qmax, &config.rf)?;
        let mut stage2_design_features =
            select_top(&ranked2, MAX_SELECTED_INPUTS - STAGE1_TARGETS.len());
        stage2_design_features.sort_unstable();

        let x2: Vec<Vec<f64>> = dataset
            .rows
            .iter()
            .map(|r| {
                let mut v = subset(&r.design.as_array(), &stage2_design_features);
                v.push(r.qois.lifetime_years);
                v.push(r.qois.sdm_pcm);
                v.push(r.qois.f_delta_h);
                v
            })
            .collect();
        let mlp_qmax = Mlp::fit(&x2, &qmax, config.mlp.clone())?;

        Ok(Self {
            stage1_features,
            stage2_design_features,
            gp_lifetime,
            gp_sdm,
            gp_fdh,
            mlp_qmax,
        })
    }

    /// Predicts all four targets; stage 2 sees stage-1 outputs, never ground
    /// truth.
    pub fn predict(&self, design: &DesignPoint) -> SurrogateQoIs {
        let row = design.as_array();
        let x1 = subset(&row, &self.stage1_features);
        let (lifetime, _) = self.gp_lifetime.predict(&x1);
        let (sdm, _) = self.gp_sdm.predict(&x1);
        let (fdh, _) = self.gp_fdh.predict(&x1);

        let mut x2 = subset(&row, &self.stage2_design_features);
        x2.push(lifetime);
        x2.push(sdm);
        x2.push(fdh);
        let qmax = self.mlp_qmax.predict(&x2);

        SurrogateQoIs {
            lifetime_years: lifetime,
            sdm_pcm: sdm,
            f_delta_h: fdh,
            q_max_mw_m2: qmax,
        }
    }

    pub fn stage2_input_dim(&self) -> usize {
        self.stage2_design_features.len() + STAGE1_TARGETS.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("predictor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SurrogateError> {
        let mut p: Self = serde_json::from_str(text)
            .map_err(|e| SurrogateError::Schema(format!("model file: {e}")))?;
        p.gp_lifetime.refactorize()?;
        p.gp_sdm.refactorize()?;
        p.gp_fdh.refactorize()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate;
    use crate::physics::{PhysicsEvaluator, RomEvaluator};
    use crate::surrogate::dataset::DatasetRow;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rom_dataset(n: usize, seed: u64) -> Dataset {
        let rom = RomEvaluator::with_defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        while rows.len() < n {
            let unit: [f64; 7] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let design = crate::design::denormalize(&unit);
            let v = validate(design).unwrap();
            let qois = rom.evaluate(&v).unwrap();
            rows.push(DatasetRow {
                design,
                qois,
                lcoe_foak: None,
                lcoe_noak: None,
                seed,
                oracle_id: "rom-v1".into(),
            });
        }
        Dataset { rows }
    }

    fn quick_config() -> TwoStageConfig {
        TwoStageConfig {
            rf: RfConfig {
                n_trees: 60,
                ..RfConfig::default()
            },
            gp: GpSearchConfig {
                length_scales: vec![0.5, 1.0, 2.0, 3.5],
                signal_variances: vec![1.0],
                noise_variances: vec![1e-6, 1e-4],
            },
            mlp: MlpConfig {
                hidden: vec![24, 24],
                epochs: 250,
                ..MlpConfig::default()
            },
        }
    }

    #[test]
    fn stage_two_input_dimension_is_selected_plus_three() {
        let ds = rom_dataset(120, 2);
        let p = TwoStagePredictor::fit(&ds, &quick_config()).unwrap();
        assert_eq!(p.stage1_features.len(), 7);
        assert_eq!(p.stage2_design_features.len(), 5);
        assert_eq!(p.stage2_input_dim(), 8);
    }

    #[test]
    fn held_out_agreement_within_fifteen_percent() {
        let train = rom_dataset(600, 3);
        let test = rom_dataset(100, 4);
        let p = TwoStagePredictor::fit(&train, &quick_config()).unwrap();

        // relative error scaled by the held-out spread of each target, since
        // lifetime and SDM cross zero
        let mut worst: f64 = 0.0;
        let spread = |vals: &[f64]| -> f64 {
            let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
            let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
            hi - lo
        };
        let truth: Vec<[f64; 4]> = test
            .rows
            .iter()
            .map(|r| [r.qois.lifetime_years, r.qois.sdm_pcm, r.qois.f_delta_h, r.qois.q_max_mw_m2])
            .collect();
        let spreads: [f64; 4] = std::array::from_fn(|k| {
            spread(&truth.iter().map(|t| t[k]).collect::<Vec<_>>())
        });
        for (row, t) in test.rows.iter().zip(&truth) {
            let pred = p.predict(&row.design);
            let preds = [
                pred.lifetime_years,
                pred.sdm_pcm,
                pred.f_delta_h,
                pred.q_max_mw_m2,
            ];
            for k in 0..4 {
                worst = worst.max((preds[k] - t[k]).abs() / spreads[k]);
            }
        }
        assert!(worst < 0.15, "worst scaled error {worst}");
    }

    #[test]
    fn predictor_round_trips_through_json() {
        let ds = rom_dataset(100, 7);
        let p = TwoStagePredictor::fit(&ds, &quick_config()).unwrap();
        let back = TwoStagePredictor::from_json(&p.to_json()).unwrap();
        let d = DesignPoint::nominal();
        let a = p.predict(&d);
        let b = back.predict(&d);
        assert!((a.lifetime_years - b.lifetime_years).abs() < 1e-9);
        assert!((a.q_max_mw_m2 - b.q_max_mw_m2).abs() < 1e-9);
    }

    #[test]
    fn constant_stage1_target_still_predicts_finite() {
        // the stage-2 input space degenerates but predictions stay finite
        let mut ds = rom_dataset(80, 11);
        for r in &mut ds.rows {
            r.qois.sdm_pcm = -6800.0; // zero-variance stage-1 target
        }
        let p = TwoStagePredictor::fit(&ds, &quick_config()).unwrap();
        let out = p.predict(&DesignPoint::nominal());
        assert!((out.sdm_pcm - (-6800.0)).abs() < 1e-6);
        assert!(out.lifetime_years.is_finite());
        assert!(out.q_max_mw_m2.is_finite());
    }
}
