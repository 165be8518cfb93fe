//! Dataset generation: draw designs, evaluate physics and cost, filter, and
//! write the CSV.

use crate::runctx::prepare;
use crate::CommonArgs;
use anyhow::Result;
use hpmr::design::{denormalize, validate};
use hpmr::econ::build_ledger;
use hpmr::physics::{PhysicsEvaluator, RomEvaluator};
use hpmr::sampling::unit_samples;
use hpmr::surrogate::{filter_outliers, Dataset, DatasetRow};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run(common: &CommonArgs) -> Result<()> {
    let mut ctx = prepare(common, "sample")?;
    let cfg = ctx.config.clone();
    let rom = RomEvaluator::new(cfg.rom, cfg.constants);
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);

    let units = unit_samples(cfg.sampling, cfg.sample_budget, &mut rng);
    let mut rows = Vec::with_capacity(units.len());
    let mut non_starters = 0usize;
    let mut ledger_failures = 0usize;
    for unit in units {
        let design = denormalize(&unit);
        let validated = validate(design).expect("denormalized designs are in bounds");
        let qois = match rom.evaluate(&validated) {
            Ok(q) => q,
            Err(e) => {
                eprintln!("sample: evaluator failure for {design:?}: {e}");
                ledger_failures += 1;
                continue;
            }
        };
        let (lcoe_foak, lcoe_noak) = if qois.lifetime_years > 0.0 {
            match build_ledger(
                &validated,
                qois.lifetime_years,
                cfg.mode,
                &cfg.constants,
                &cfg.costs,
                &cfg.finance,
            ) {
                Ok(l) => (Some(l.foak_lcoe), Some(l.noak_lcoe)),
                Err(e) => {
                    eprintln!("sample: ledger failure for {design:?}: {e}");
                    ledger_failures += 1;
                    (None, None)
                }
            }
        } else {
            non_starters += 1;
            (None, None)
        };
        rows.push(DatasetRow {
            design,
            qois,
            lcoe_foak,
            lcoe_noak,
            seed: cfg.seed,
            oracle_id: rom.id().to_string(),
        });
    }

    let raw = Dataset { rows };
    let (clean, removed) = if raw.is_empty() {
        (raw, 0)
    } else {
        filter_outliers(&raw)?
    };
    eprintln!(
        "sample: {} drawn, {} non-starters, {} evaluator/ledger failures, {} filtered, {} retained",
        cfg.sample_budget,
        non_starters,
        ledger_failures,
        removed,
        clean.len()
    );

    let csv = clean.to_csv(&ctx.header_comments());
    let path = ctx.write("dataset.csv", &csv)?;
    println!("sample: wrote {} rows to {}", clean.len(), path.display());
    ctx.finish()
}
