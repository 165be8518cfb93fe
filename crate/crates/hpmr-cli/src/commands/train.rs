//! Surrogate training: k-fold cross-validation report plus the final fitted
//! model.

use crate::runctx::prepare;
use crate::CommonArgs;
use anyhow::{bail, Context, Result};
use hpmr::surrogate::{filter_outliers, kfold_r2, Dataset, TwoStagePredictor};

pub fn run(common: &CommonArgs, dataset_path: Option<&str>) -> Result<()> {
    let mut ctx = prepare(common, "train")?;
    let cfg = ctx.config.clone();

    let default_path = format!("{}/{}/sample/dataset.csv", cfg.out_dir, cfg.scenario);
    let path = dataset_path.unwrap_or(&default_path);
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading dataset {path}"))?;
    let raw = Dataset::from_csv(&text)?;
    let (dataset, removed) = filter_outliers(&raw)?;
    if dataset.len() < 100 {
        bail!(
            "training needs at least 100 rows, dataset {} has {} after filtering",
            path,
            dataset.len()
        );
    }
    eprintln!(
        "train: {} rows ({} filtered) from {}",
        dataset.len(),
        removed,
        path
    );

    let mut two_stage = cfg.surrogate.two_stage.clone();
    two_stage.rf.seed = cfg.seed;
    two_stage.mlp.seed = cfg.seed;
    let cv = kfold_r2(&two_stage, &dataset, cfg.surrogate.cv_folds, cfg.seed)?;
    let predictor = TwoStagePredictor::fit(&dataset, &two_stage)?;

    let mut report = String::new();
    for c in ctx.header_comments() {
        report.push_str(&format!("# {c}\n"));
    }
    report.push_str(&format!(
        "folds = {}\nrows = {}\nr2_lifetime = {:.4}\nr2_sdm = {:.4}\nr2_fdh = {:.4}\nr2_qmax = {:.4}\nstage1_features = {:?}\nstage2_design_features = {:?}\n",
        cv.folds,
        dataset.len(),
        cv.lifetime,
        cv.sdm,
        cv.f_delta_h,
        cv.q_max,
        predictor.stage1_features,
        predictor.stage2_design_features,
    ));
    ctx.write("cv_report.txt", &report)?;
    ctx.write("model.json", &predictor.to_json())?;

    println!(
        "train: cv R2 lifetime {:.3} | sdm {:.3} | fdh {:.3} | qmax {:.3} ({}-fold, {} rows)",
        cv.lifetime,
        cv.sdm,
        cv.f_delta_h,
        cv.q_max,
        cv.folds,
        dataset.len()
    );
    ctx.finish()
}
