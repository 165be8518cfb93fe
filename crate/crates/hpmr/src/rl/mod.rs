//! PPO over the normalized design space with a penalty-augmented reward,
//! plus a random-search baseline.

pub mod gae;
pub mod policy;
pub mod ppo;
pub mod random_search;
pub mod train;

use crate::design::{validate, DesignPoint};
use crate::econ::{build_ledger, CostDatabase, EconError, FinanceAssumptions, ReflectorCostMode};
use crate::physics::{PhysicsEvaluator, PhysicsError};
use crate::surrogate::{SurrogateQoIs, TwoStagePredictor};
use crate::ReactorConstants;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gae::gae;
pub use policy::{sample_actions, ActionSample, PolicyState};
pub use ppo::{ppo_update, LossDiagnostics, OptimizerKind, PpoConfig};
pub use random_search::{random_search_baseline, RandomSearchResult};
pub use train::{train, Champion, EpochStats, TrainConfig, TrainResult, TrainingTrace};

/// Constraint direction: where the violation lies relative to the limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Violated when the value falls below the limit.
    ViolatedBelow(f64),
    /// Violated when the value rises above the limit.
    ViolatedAbove(f64),
    /// Violated outside the closed interval; the nearer bound prices the
    /// violation.
    Outside(f64, f64),
}

impl Direction {
    /// Relative quadratic violation ((x - c)/c)^2 against the violated bound,
    /// zero when satisfied.
    pub fn violation(&self, x: f64) -> f64 {
        let rel = |x: f64, c: f64| ((x - c) / c).powi(2);
        match *self {
            Direction::ViolatedBelow(c) => {
                if x < c {
                    rel(x, c)
                } else {
                    0.0
                }
            }
            Direction::ViolatedAbove(c) => {
                if x > c {
                    rel(x, c)
                } else {
                    0.0
                }
            }
            Direction::Outside(lo, hi) => {
                if x < lo {
                    rel(x, lo)
                } else if x > hi {
                    rel(x, hi)
                } else {
                    0.0
                }
            }
        }
    }
}

/// The four constrained QoIs and the reward weights.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstraintSpec {
    /// Peak heat flux cap (MW/m^2).
    pub q_max_limit: f64,
    pub q_max_weight: f64,
    /// Rod-integrated peaking cap.
    pub f_dh_limit: f64,
    pub f_dh_weight: f64,
    /// Shutdown margin must sit at or below this (pcm).
    pub sdm_limit: f64,
    pub sdm_weight: f64,
    /// Fuel lifetime window (years).
    pub lifetime_min: f64,
    pub lifetime_max: f64,
    pub lifetime_weight: f64,
    /// Reward slope on the FOAK LCOE.
    pub gamma_lcoe: f64,
    /// LCOE stand-in for designs that never go critical.
    pub non_starter_lcoe: f64,
}

impl Default for ConstraintSpec {
    fn default() -> Self {
        Self {
            q_max_limit: 0.020,
            q_max_weight: 10_000.0,
            f_dh_limit: 1.47,
            f_dh_weight: 10_000.0,
            sdm_limit: -6700.0,
            sdm_weight: 10_000.0,
            lifetime_min: 6.0,
            lifetime_max: 10.40,
            lifetime_weight: 10_000.0,
            gamma_lcoe: 0.1,
            non_starter_lcoe: 40_000.0,
        }
    }
}

/// The QoI values the constraints look at, shared by the oracle and
/// surrogate evaluation paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintValues {
    pub lifetime_years: f64,
    pub sdm_pcm: f64,
    pub f_delta_h: f64,
    pub q_max_mw_m2: f64,
}

impl From<&crate::physics::QoIBundle> for ConstraintValues {
    fn from(q: &crate::physics::QoIBundle) -> Self {
        Self {
            lifetime_years: q.lifetime_years,
            sdm_pcm: q.sdm_pcm,
            f_delta_h: q.f_delta_h,
            q_max_mw_m2: q.q_max_mw_m2,
        }
    }
}

impl From<&SurrogateQoIs> for ConstraintValues {
    fn from(q: &SurrogateQoIs) -> Self {
        Self {
            lifetime_years: q.lifetime_years,
            sdm_pcm: q.sdm_pcm,
            f_delta_h: q.f_delta_h,
            q_max_mw_m2: q.q_max_mw_m2,
        }
    }
}

impl ConstraintSpec {
    fn constraints(&self) -> [(Direction, f64); 4] {
        [
            (Direction::ViolatedAbove(self.q_max_limit), self.q_max_weight),
            (Direction::ViolatedAbove(self.f_dh_limit), self.f_dh_weight),
            (Direction::ViolatedAbove(self.sdm_limit), self.sdm_weight),
            (
                Direction::Outside(self.lifetime_min, self.lifetime_max),
                self.lifetime_weight,
            ),
        ]
    }

    fn values_in_order(v: &ConstraintValues) -> [f64; 4] {
        [v.q_max_mw_m2, v.f_delta_h, v.sdm_pcm, v.lifetime_years]
    }

    /// Weighted penalty sum, zero exactly on the feasible set.
    pub fn penalty(&self, values: &ConstraintValues) -> f64 {
        self.constraints()
            .iter()
            .zip(Self::values_in_order(values))
            .map(|((dir, weight), x)| weight * dir.violation(x))
            .sum()
    }

    pub fn feasible(&self, values: &ConstraintValues) -> bool {
        self.constraints()
            .iter()
            .zip(Self::values_in_order(values))
            .all(|((dir, _), x)| dir.violation(x) == 0.0)
    }
}

/// One evaluated design on either path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOutcome {
    pub values: ConstraintValues,
    /// FOAK LCOE; absent for non-starters.
    pub lcoe_foak: Option<f64>,
    pub lcoe_noak: Option<f64>,
}

/// Reward for one outcome: -gamma_lcoe * LCOE - sum of weighted violations.
/// Non-starters price the LCOE term at the configured stand-in and keep the
/// lifetime penalty from the (negative) extrapolated lifetime.
pub fn reward(outcome: &EvalOutcome, spec: &ConstraintSpec) -> f64 {
    let lcoe = outcome.lcoe_foak.unwrap_or(spec.non_starter_lcoe);
    -spec.gamma_lcoe * lcoe - spec.penalty(&outcome.values)
}

/// The reward-side evaluator: design in, constrained QoIs and cost out.
/// Implementations must be safe to call from many workers concurrently.
pub trait ObjectiveEvaluator: Sync {
    fn evaluate(&self, design: &DesignPoint) -> Result<EvalOutcome, RlError>;

    /// Short identifier recorded in outputs.
    fn id(&self) -> &'static str;
}

/// Full-order path: reduced-order physics plus the cost ledger.
pub struct OracleObjective<'a> {
    pub physics: &'a dyn PhysicsEvaluator,
    pub mode: ReflectorCostMode,
    pub constants: &'a ReactorConstants,
    pub db: &'a CostDatabase,
    pub fin: &'a FinanceAssumptions,
}

impl ObjectiveEvaluator for OracleObjective<'_> {
    fn evaluate(&self, design: &DesignPoint) -> Result<EvalOutcome, RlError> {
        let validated = validate(*design).map_err(|e| RlError::InvalidDesign(e.to_string()))?;
        let qois = self.physics.evaluate(&validated)?;
        let (lcoe_foak, lcoe_noak) = if qois.lifetime_years > 0.0 {
            let ledger = build_ledger(
                &validated,
                qois.lifetime_years,
                self.mode,
                self.constants,
                self.db,
                self.fin,
            )?;
            (Some(ledger.foak_lcoe), Some(ledger.noak_lcoe))
        } else {
            (None, None)
        };
        Ok(EvalOutcome {
            values: ConstraintValues::from(&qois),
            lcoe_foak,
            lcoe_noak,
        })
    }

    fn id(&self) -> &'static str {
        "oracle"
    }
}

/// Surrogate path: two-stage predictions feed the same cost ledger.
pub struct SurrogateObjective<'a> {
    pub predictor: &'a TwoStagePredictor,
    pub mode: ReflectorCostMode,
    pub constants: &'a ReactorConstants,
    pub db: &'a CostDatabase,
    pub fin: &'a FinanceAssumptions,
}

impl ObjectiveEvaluator for SurrogateObjective<'_> {
    fn evaluate(&self, design: &DesignPoint) -> Result<EvalOutcome, RlError> {
        let validated = validate(*design).map_err(|e| RlError::InvalidDesign(e.to_string()))?;
        let qois = self.predictor.predict(design);
        let (lcoe_foak, lcoe_noak) = if qois.lifetime_years > 0.0 {
            let ledger = build_ledger(
                &validated,
                qois.lifetime_years,
                self.mode,
                self.constants,
                self.db,
                self.fin,
            )?;
            (Some(ledger.foak_lcoe), Some(ledger.noak_lcoe))
        } else {
            (None, None)
        };
        Ok(EvalOutcome {
            values: ConstraintValues::from(&qois),
            lcoe_foak,
            lcoe_noak,
        })
    }

    fn id(&self) -> &'static str {
        "surrogate"
    }
}

#[derive(Debug, Clone, Error)]
pub enum RlError {
    #[error("invalid design reached the evaluator: {0}")]
    InvalidDesign(String),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Econ(#[from] EconError),
    #[error("batch length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("non-finite loss in update (policy step {step}): {detail}")]
    NonFiniteLoss { step: u64, detail: String },
    #[error("{failures} evaluator failures exceeded the abort threshold")]
    TooManyFailures { failures: usize },
    #[error("constraint limit must be nonzero")]
    ZeroLimit,
}
