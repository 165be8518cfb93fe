//! Techno-economic design optimization toolkit for a heat-pipe microreactor.
//!
//! The pipeline evaluates candidate core designs over a 7-parameter space:
//! a reduced-order physics model produces the quantities of interest
//! (fuel lifetime, shutdown margin, peaking factors, heat fluxes, isothermal
//! temperature coefficients), a code-of-accounts engine turns them into a
//! levelized cost of electricity, and a PPO optimizer with a penalty-augmented
//! reward searches the space, optionally through a two-stage GP/MLP surrogate.

pub mod config;
pub mod constants;
pub mod design;
pub mod econ;
pub mod geometry;
pub mod inventory;
pub mod physics;
pub mod rl;
pub mod sampling;
pub mod surrogate;

pub use constants::ReactorConstants;
pub use design::{DesignPoint, ValidatedDesign};
pub use econ::{CostDatabase, CostLedger, FinanceAssumptions, ReflectorCostMode};
pub use physics::{PhysicsEvaluator, QoIBundle};
