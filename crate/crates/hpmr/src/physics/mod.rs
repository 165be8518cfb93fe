//! Physics quantities of interest and the pluggable evaluator interface.

pub mod peaking;
pub mod reactivity;
pub mod rom;

use crate::design::ValidatedDesign;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rom::{RomCoefficients, RomEvaluator};

/// The quantities of interest for one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QoIBundle {
    /// Fuel lifetime in years; negative for non-starter cores.
    pub lifetime_years: f64,
    /// Shutdown margin (pcm).
    pub sdm_pcm: f64,
    /// Node peaking factor.
    pub f_q: f64,
    /// Rod-integrated peaking factor.
    pub f_delta_h: f64,
    /// Average compact surface heat flux (MW/m^2).
    pub q_avg_mw_m2: f64,
    /// Peak compact surface heat flux (MW/m^2).
    pub q_max_mw_m2: f64,
    /// Isothermal temperature coefficient over 550-850 K (pcm/K).
    pub itc_low_pcm_k: f64,
    /// Isothermal temperature coefficient over 850-1150 K (pcm/K).
    pub itc_high_pcm_k: f64,
}

impl QoIBundle {
    pub fn all_finite(&self) -> bool {
        [
            self.lifetime_years,
            self.sdm_pcm,
            self.f_q,
            self.f_delta_h,
            self.q_avg_mw_m2,
            self.q_max_mw_m2,
            self.itc_low_pcm_k,
            self.itc_high_pcm_k,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Ordered (time in years, k_eff) pairs from a depletion evaluation. The
/// first entry is the brief quasi-equilibrium step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeffTrace(Vec<(f64, f64)>);

impl KeffTrace {
    /// Requires strictly increasing times and positive k_eff values.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, PhysicsError> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(PhysicsError::TraceNotIncreasing);
            }
        }
        if points.iter().any(|&(_, k)| !(k > 0.0) || !k.is_finite()) {
            return Err(PhysicsError::NonPositiveK);
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// k_eff at the reactivity states entering the shutdown-margin and ITC
/// evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReactivityStates {
    /// Isothermal 800 K, all drums out.
    pub k_hzp_800: f64,
    /// Hot full power, drums out.
    pub k_hfp: f64,
    /// All drums rotated in.
    pub k_all_drums_in: f64,
    /// Single most-effective drum rotated in.
    pub k_one_drum_in: f64,
    pub k_iso_550: f64,
    pub k_iso_850: f64,
    pub k_iso_1150: f64,
}

/// Evaluation result with optional depletion-trace attachment, the adapter
/// contract for substituting a transport-code backend later.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub qois: QoIBundle,
    pub trace: Option<KeffTrace>,
    pub states: Option<ReactivityStates>,
}

/// A physics backend: design in, QoI bundle out. Implementations must be
/// deterministic for a fixed configuration and safe to call from many
/// workers concurrently.
pub trait PhysicsEvaluator: Sync {
    fn evaluate(&self, design: &ValidatedDesign) -> Result<QoIBundle, PhysicsError> {
        Ok(self.evaluate_detailed(design)?.qois)
    }

    fn evaluate_detailed(&self, design: &ValidatedDesign) -> Result<Evaluation, PhysicsError>;

    /// Short identifier recorded in dataset files.
    fn id(&self) -> &'static str;
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PhysicsError {
    #[error("power field is empty")]
    EmptyPowerField,
    #[error("power field is all zero")]
    AllZeroPowerField,
    #[error("power field has negative entries")]
    NegativePower,
    #[error("compacts have differing axial node counts")]
    RaggedPowerField,
    #[error("k_eff must be positive")]
    NonPositiveK,
    #[error("trace times must be strictly increasing")]
    TraceNotIncreasing,
    #[error("need at least 3 trace points, got {0}")]
    TraceTooShort(usize),
    #[error("trace slope is zero and k never crosses 1")]
    FlatTrace,
    #[error("ITC requires two distinct temperatures")]
    EqualTemperatures,
    #[error("peaking factor must be >= 1, got {0}")]
    PeakingBelowOne(f64),
}
