//! Random-search baseline under the same reward as the optimizer.

use crate::runctx::prepare;
use crate::CommonArgs;
use anyhow::Result;
use hpmr::physics::RomEvaluator;
use hpmr::rl::{random_search_baseline, OracleObjective};

pub fn run(common: &CommonArgs) -> Result<()> {
    let mut ctx = prepare(common, "baseline")?;
    let cfg = ctx.config.clone();
    let rom = RomEvaluator::new(cfg.rom, cfg.constants);
    let objective = OracleObjective {
        physics: &rom,
        mode: cfg.mode,
        constants: &cfg.constants,
        db: &cfg.costs,
        fin: &cfg.finance,
    };

    eprintln!("baseline: {} uniform samples", cfg.baseline_budget);
    let result = random_search_baseline(
        &objective,
        &cfg.constraints,
        cfg.baseline_budget,
        cfg.seed,
        cfg.epoch_samples,
    )?;

    ctx.write(
        "baseline_trace.csv",
        &result.trace.to_csv(&ctx.header_comments()),
    )?;

    let mut summary = String::new();
    for c in ctx.header_comments() {
        summary.push_str(&format!("# {c}\n"));
    }
    summary.push_str(&format!("samples = {}\n", result.samples_used));
    summary.push_str(&format!("feasible = {}\n", result.feasible_lcoes.len()));
    if let Some(mean) = result.feasible_mean_lcoe() {
        summary.push_str(&format!("feasible_mean_lcoe = {mean}\n"));
    }
    if let Some(best) = &result.best {
        summary.push_str(&format!("best_reward = {}\n", best.reward));
        summary.push_str(&format!("best_design = {}\n", best.design.to_csv_row()));
        if let Some(l) = best.outcome.lcoe_foak {
            summary.push_str(&format!("best_lcoe_foak = {l}\n"));
        }
    }
    ctx.write("baseline.txt", &summary)?;

    println!(
        "baseline: {} feasible of {} samples, feasible mean LCOE {}",
        result.feasible_lcoes.len(),
        result.samples_used,
        result
            .feasible_mean_lcoe()
            .map(|v| format!("{v:.0} $/MWh"))
            .unwrap_or_else(|| "n/a".into())
    );
    ctx.finish()
}
