//! Cross-module behavior of the optimizer against the bundled physics model.

use hpmr::econ::{CostDatabase, FinanceAssumptions, ReflectorCostMode};
use hpmr::physics::RomEvaluator;
use hpmr::rl::{
    random_search_baseline, train, ConstraintSpec, OracleObjective, TrainConfig,
};
use hpmr::ReactorConstants;

fn with_objective<T>(mode: ReflectorCostMode, f: impl FnOnce(&OracleObjective) -> T) -> T {
    let rom = RomEvaluator::with_defaults();
    let constants = ReactorConstants::default();
    let db = CostDatabase::default();
    let fin = FinanceAssumptions::default();
    f(&OracleObjective {
        physics: &rom,
        mode,
        constants: &constants,
        db: &db,
        fin: &fin,
    })
}

#[test]
fn mean_reward_curve_converges() {
    // rolling variance of the epoch-mean rewards over the last three epochs
    // falls below 10% of the first epoch's within-epoch reward variance
    let result = with_objective(ReflectorCostMode::Be, |obj| {
        let cfg = TrainConfig {
            total_samples: 60_000,
            epoch_samples: 5_000,
            seed: 4,
            ..TrainConfig::default()
        };
        train(obj, &ConstraintSpec::default(), &cfg).unwrap()
    });
    let epochs = &result.trace.epochs;
    assert!(epochs.len() >= 6, "need enough epochs, got {}", epochs.len());

    let last3: Vec<f64> = epochs[epochs.len() - 3..]
        .iter()
        .map(|e| e.mean_reward)
        .collect();
    let mean = last3.iter().sum::<f64>() / 3.0;
    let rolling_var = last3.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0;
    let first_epoch_var = epochs[0].reward_variance;
    assert!(
        rolling_var < 0.1 * first_epoch_var,
        "rolling variance {rolling_var} vs first-epoch variance {first_epoch_var}"
    );
}

#[test]
fn ppo_beats_random_search_at_equal_small_budget() {
    // paired-seed experiment: at a 10k budget the optimizer's best reward is
    // at least the random-search best in 8 of 10 seeds
    let mut wins = 0;
    for seed in 0..10u64 {
        let (ppo_best, rs_best) = with_objective(ReflectorCostMode::Be, |obj| {
            let spec = ConstraintSpec::default();
            let cfg = TrainConfig {
                total_samples: 10_000,
                epoch_samples: 2_000,
                seed,
                ..TrainConfig::default()
            };
            let result = train(obj, &spec, &cfg).unwrap();
            let ppo_best = result
                .trace
                .epochs
                .iter()
                .map(|e| e.max_reward)
                .fold(f64::MIN, f64::max);
            let rs = random_search_baseline(obj, &spec, 10_000, seed + 300, 2_000).unwrap();
            (ppo_best, rs.best.unwrap().reward)
        });
        if rs_best <= ppo_best {
            wins += 1;
        }
    }
    assert!(wins >= 8, "PPO won only {wins}/10 paired seeds");
}

#[test]
fn graphite_and_be_champions_differ_in_the_expected_direction() {
    // a modest budget already separates the two cost scenarios
    let be = with_objective(ReflectorCostMode::Be, |obj| {
        train(
            obj,
            &ConstraintSpec::default(),
            &TrainConfig {
                total_samples: 30_000,
                seed: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap()
    });
    let gr = with_objective(ReflectorCostMode::Graphite, |obj| {
        train(
            obj,
            &ConstraintSpec::default(),
            &TrainConfig {
                total_samples: 30_000,
                seed: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap()
    });
    let be_champ = be.champions.first().unwrap().design;
    let gr_champ = gr.champions.first().unwrap().design;
    assert!(
        be_champ.fuel_height_cm > gr_champ.fuel_height_cm,
        "be fh {} should exceed graphite fh {}",
        be_champ.fuel_height_cm,
        gr_champ.fuel_height_cm
    );
}
