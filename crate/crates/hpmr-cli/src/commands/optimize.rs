//! PPO optimization run: trains against the surrogate (or the physics model
//! directly with --oracle), re-evaluates the champion pool full-order, and
//! writes the trace and the champion table.

use crate::runctx::prepare;
use crate::CommonArgs;
use anyhow::{bail, Context, Result};
use hpmr::design::DESIGN_CSV_HEADER;
use hpmr::physics::RomEvaluator;
use hpmr::rl::{
    train, Champion, EvalOutcome, ObjectiveEvaluator, OracleObjective,
    SurrogateObjective, TrainConfig,
};
use hpmr::surrogate::TwoStagePredictor;

pub fn run(common: &CommonArgs, model_path: Option<&str>, oracle: bool) -> Result<()> {
    let mut ctx = prepare(common, "optimize")?;
    let cfg = ctx.config.clone();
    let rom = RomEvaluator::new(cfg.rom, cfg.constants);
    let spec = cfg.constraints;

    let predictor: Option<TwoStagePredictor> = if oracle {
        None
    } else {
        let default_path = format!("{}/{}/train/model.json", cfg.out_dir, cfg.scenario);
        let path = model_path.unwrap_or(&default_path);
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading model {path}"))?;
        Some(TwoStagePredictor::from_json(&text)?)
    };

    let train_cfg = TrainConfig {
        total_samples: cfg.optimize_budget,
        workers: cfg.workers,
        epoch_samples: cfg.epoch_samples,
        top_k: cfg.top_k,
        seed: cfg.seed,
        max_failures: cfg.max_failures,
        ppo: cfg.ppo,
    };

    let oracle_objective = OracleObjective {
        physics: &rom,
        mode: cfg.mode,
        constants: &cfg.constants,
        db: &cfg.costs,
        fin: &cfg.finance,
    };
    let result = match &predictor {
        Some(p) => {
            let objective = SurrogateObjective {
                predictor: p,
                mode: cfg.mode,
                constants: &cfg.constants,
                db: &cfg.costs,
                fin: &cfg.finance,
            };
            eprintln!(
                "optimize: {} samples on the surrogate path, {} workers",
                cfg.optimize_budget, cfg.workers
            );
            train(&objective, &spec, &train_cfg)?
        }
        None => {
            eprintln!(
                "optimize: {} samples on the oracle path, {} workers",
                cfg.optimize_budget, cfg.workers
            );
            train(&oracle_objective, &spec, &train_cfg)?
        }
    };

    ctx.write("trace.csv", &result.trace.to_csv(&ctx.header_comments()))?;

    // full-order re-evaluation of the champion pool
    let re_evaluated: Vec<(Champion, EvalOutcome)> = result
        .champions
        .iter()
        .map(|c| {
            let truth = oracle_objective.evaluate(&c.design)?;
            Ok((c.clone(), truth))
        })
        .collect::<Result<_, hpmr::rl::RlError>>()?;

    let mut csv = String::new();
    for c in ctx.header_comments() {
        csv.push_str(&format!("# {c}\n"));
    }
    csv.push_str(DESIGN_CSV_HEADER);
    csv.push_str(",eval_lifetime_y,eval_sdm_pcm,eval_fdh,eval_qmax_mw_m2,eval_lcoe_foak,true_lifetime_y,true_sdm_pcm,true_fdh,true_qmax_mw_m2,true_lcoe_foak,true_feasible\n");
    for (c, truth) in &re_evaluated {
        let p = &c.outcome;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            c.design.to_csv_row(),
            p.values.lifetime_years,
            p.values.sdm_pcm,
            p.values.f_delta_h,
            p.values.q_max_mw_m2,
            p.lcoe_foak.map(|v| v.to_string()).unwrap_or_default(),
            truth.values.lifetime_years,
            truth.values.sdm_pcm,
            truth.values.f_delta_h,
            truth.values.q_max_mw_m2,
            truth.lcoe_foak.map(|v| v.to_string()).unwrap_or_default(),
            spec.feasible(&truth.values),
        ));
    }
    ctx.write("champions.csv", &csv)?;

    // the champion: best full-order-feasible by true LCOE, falling back to
    // the best by the evaluation path if none survives re-evaluation
    let champion = re_evaluated
        .iter()
        .filter(|(_, truth)| spec.feasible(&truth.values) && truth.lcoe_foak.is_some())
        .min_by(|a, b| {
            a.1.lcoe_foak
                .unwrap()
                .partial_cmp(&b.1.lcoe_foak.unwrap())
                .unwrap()
        })
        .or_else(|| re_evaluated.first());
    let Some((champ, truth)) = champion else {
        bail!("optimizer found no feasible design in {} samples", result.samples_used);
    };

    let mut champion_csv = String::new();
    for c in ctx.header_comments() {
        champion_csv.push_str(&format!("# {c}\n"));
    }
    champion_csv.push_str(DESIGN_CSV_HEADER);
    champion_csv.push('\n');
    champion_csv.push_str(&champ.design.to_csv_row());
    champion_csv.push('\n');
    ctx.write("champion.csv", &champion_csv)?;

    println!(
        "optimize: champion FOAK {:.0} $/MWh (full-order {:.0}), fh {:.1} cm, mr {:.3} cm, {} samples, {} epochs",
        champ.outcome.lcoe_foak.unwrap_or(f64::NAN),
        truth.lcoe_foak.unwrap_or(f64::NAN),
        champ.design.fuel_height_cm,
        champ.design.moderator_radius_cm,
        result.samples_used,
        result.trace.epochs.len()
    );
    ctx.finish()
}
