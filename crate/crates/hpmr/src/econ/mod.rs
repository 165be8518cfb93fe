//! Code-of-accounts economic engine: fuel cycle with SWU mass balance, O&M
//! with capacity factor and decennial replacements, capital cost with
//! cost-to-capacity scaling, escalation to $2024, discounting, FOAK LCOE,
//! and the NOAK learning curve.

pub mod capacity;
pub mod capital;
pub mod fuel;
pub mod lcoe;
pub mod ledger;
pub mod om;
pub mod swu;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub use capacity::capacity_factor;
pub use capital::{capital_cost, control_drum_cost, cost_to_capacity};
pub use fuel::fuel_cycle_cost;
pub use lcoe::{escalate, lcoe, noak};
pub use ledger::{build_ledger, burnup_gwd_per_thm, ledger_csv, ledger_text, CostLedger};
pub use swu::swu_per_kg_product;

/// All escalation lands in this dollar-year.
pub const TARGET_DOLLAR_YEAR: u32 = 2024;

/// Hours in an average year (365.25 days).
pub const HOURS_PER_YEAR: f64 = 8766.0;

/// A dollar amount tagged with its native dollar-year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Money {
    pub amount: f64,
    pub year: u32,
}

impl Money {
    pub const fn new(amount: f64, year: u32) -> Self {
        Self { amount, year }
    }
}

/// Which unit price the axial reflector carries. The reflector stays
/// beryllium in the physics and mass models either way; only the $/kg used
/// by the cost engine changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectorCostMode {
    Be,
    Graphite,
}

impl std::fmt::Display for ReflectorCostMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Be => write!(f, "be"),
            Self::Graphite => write!(f, "graphite"),
        }
    }
}

impl std::str::FromStr for ReflectorCostMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "be" => Ok(Self::Be),
            "graphite" => Ok(Self::Graphite),
            other => Err(format!("unknown reflector cost mode {other:?} (be|graphite)")),
        }
    }
}

/// What a scaled account's cost-to-capacity variable measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingVariable {
    ThermalPowerMw,
    CoreMassKg,
}

/// One cost-to-capacity account: I_fixed + I_ref * (X0/X_ref)^n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CtcAccount {
    pub name: String,
    pub i_fixed: Money,
    pub i_ref: Money,
    pub x_ref: f64,
    pub n_scale: f64,
    pub scaling: ScalingVariable,
    pub learning_rate: f64,
    /// Whether the account joins the decennial replacement annuity.
    pub replaced_decennially: bool,
}

/// Per-account learning rates for the NOAK curve. Accounts that are already
/// mass-produced or see no factory learning carry zero.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct LearningRates {
    pub axial_reflector: f64,
    pub radial_reflector: f64,
    pub monolith: f64,
    pub drums: f64,
    pub triso: f64,
    pub heat_pipes: f64,
    pub yhx: f64,
    pub steel: f64,
    pub indirect: f64,
    pub financing: f64,
    pub decommissioning: f64,
    pub fuel_cycle: f64,
    pub disposal: f64,
    pub staffing: f64,
    pub maintenance: f64,
    pub capital_plant: f64,
    pub fixed_om: f64,
}

impl Default for LearningRates {
    fn default() -> Self {
        Self {
            axial_reflector: 0.25,
            radial_reflector: 0.10,
            monolith: 0.15,
            drums: 0.30,
            triso: 0.30,
            heat_pipes: 0.35,
            yhx: 0.20,
            steel: 0.10,
            indirect: 0.20,
            financing: 0.15,
            decommissioning: 0.0,
            fuel_cycle: 0.10,
            disposal: 0.0,
            staffing: 0.0,
            maintenance: 0.15,
            capital_plant: 0.15,
            fixed_om: 0.0,
        }
    }
}

/// Unit costs with native dollar-years, scaling accounts, learning rates,
/// and the escalation index table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CostDatabase {
    pub natural_uranium_per_kgu: Money,
    pub conversion_per_kgu: Money,
    pub enrichment_per_swu: Money,
    /// Price multiplier provisioned for enrichment above 10%.
    pub enrichment_penalty: f64,
    pub fuel_fabrication_per_kgu: Money,
    pub spent_fuel_disposal_per_mwh: Money,
    pub decommissioning_per_kwe: Money,
    pub heat_pipe_each: Money,
    pub beryllium_per_kg: Money,
    pub b4c_enriched_per_kg: Money,
    pub b4c_natural_per_kg: Money,
    pub triso_per_kg: Money,
    pub yhx_per_kg: Money,
    pub graphite_per_kg: Money,
    pub structural_steel_per_kg: Money,
    pub drum_installation_each: Money,
    pub drum_fabrication_each: Money,
    pub labor_per_fte: Money,
    pub regulatory_fees_annual: Money,
    pub property_tax_insurance_annual: Money,
    /// Annual maintenance as a fraction of the direct capital cost.
    pub maintenance_fraction: f64,
    /// Capital plant expenditures as a fraction of the direct capital cost.
    pub capital_plant_expenditure_fraction: f64,
    /// Indirect capital as a fraction of the direct capital cost.
    pub indirect_cost_fraction: f64,
    /// Capitalized financing on the OCC at the assumed debt-to-equity ratio.
    pub financing_multiplier: f64,
    pub ctc_accounts: Vec<CtcAccount>,
    pub learning: LearningRates,
    /// Escalation index by dollar-year (CPI-like, editable config data).
    pub escalation_index: BTreeMap<u32, f64>,
}

impl Default for CostDatabase {
    fn default() -> Self {
        let escalation_index: BTreeMap<u32, f64> = [
            (2009, 214.537),
            (2017, 245.120),
            (2022, 292.655),
            (2023, 304.702),
            (2024, 313.689),
        ]
        .into_iter()
        .collect();
        Self {
            natural_uranium_per_kgu: Money::new(184.0, 2022),
            conversion_per_kgu: Money::new(15.1, 2022),
            enrichment_per_swu: Money::new(184.2, 2022),
            enrichment_penalty: 1.15,
            fuel_fabrication_per_kgu: Money::new(10_000.0, 2009),
            spent_fuel_disposal_per_mwh: Money::new(1.0, 2024),
            decommissioning_per_kwe: Money::new(1_100.0, 2024),
            heat_pipe_each: Money::new(10_000.0, 2017),
            beryllium_per_kg: Money::new(45_000.0, 2024),
            b4c_enriched_per_kg: Money::new(10_064.0, 2023),
            b4c_natural_per_kg: Money::new(14_268.0, 2023),
            triso_per_kg: Money::new(10_000.0, 2009),
            yhx_per_kg: Money::new(1_520.0, 2017),
            graphite_per_kg: Money::new(80.0, 2022),
            structural_steel_per_kg: Money::new(6.0, 2022),
            drum_installation_each: Money::new(80_665.0, 2024),
            drum_fabrication_each: Money::new(323_650.0, 2024),
            labor_per_fte: Money::new(178_500.0, 2024),
            regulatory_fees_annual: Money::new(500_000.0, 2024),
            property_tax_insurance_annual: Money::new(500_000.0, 2024),
            maintenance_fraction: 0.015,
            capital_plant_expenditure_fraction: 0.005,
            indirect_cost_fraction: 0.35,
            financing_multiplier: 0.2,
            ctc_accounts: vec![
                CtcAccount {
                    name: "structures and site".into(),
                    i_fixed: Money::new(2.0e6, 2024),
                    i_ref: Money::new(8.0e6, 2024),
                    x_ref: 2.0,
                    n_scale: 0.7,
                    scaling: ScalingVariable::ThermalPowerMw,
                    learning_rate: 0.10,
                    replaced_decennially: false,
                },
                CtcAccount {
                    name: "power conversion".into(),
                    i_fixed: Money::new(0.0, 2024),
                    i_ref: Money::new(8.0e6, 2024),
                    x_ref: 2.0,
                    n_scale: 0.75,
                    scaling: ScalingVariable::ThermalPowerMw,
                    learning_rate: 0.25,
                    replaced_decennially: false,
                },
                CtcAccount {
                    name: "electrical equipment".into(),
                    i_fixed: Money::new(0.0, 2024),
                    i_ref: Money::new(3.0e6, 2024),
                    x_ref: 2.0,
                    n_scale: 0.7,
                    scaling: ScalingVariable::ThermalPowerMw,
                    learning_rate: 0.20,
                    replaced_decennially: false,
                },
                CtcAccount {
                    name: "instrumentation and control".into(),
                    i_fixed: Money::new(4.0e6, 2024),
                    i_ref: Money::new(0.0, 2024),
                    x_ref: 2.0,
                    n_scale: 0.7,
                    scaling: ScalingVariable::ThermalPowerMw,
                    learning_rate: 0.25,
                    replaced_decennially: false,
                },
                CtcAccount {
                    name: "vessel and core structures".into(),
                    i_fixed: Money::new(1.0e6, 2024),
                    i_ref: Money::new(4.0e6, 2024),
                    x_ref: 20_000.0,
                    n_scale: 0.6,
                    scaling: ScalingVariable::CoreMassKg,
                    learning_rate: 0.30,
                    replaced_decennially: true,
                },
            ],
            learning: LearningRates::default(),
            escalation_index,
        }
    }
}

impl CostDatabase {
    /// Checks the documented invariants: learning rates in [0,1) and scaling
    /// exponents in (0, 1.2].
    pub fn validate(&self) -> Result<(), EconError> {
        let l = &self.learning;
        let rates = [
            l.axial_reflector,
            l.radial_reflector,
            l.monolith,
            l.drums,
            l.triso,
            l.heat_pipes,
            l.yhx,
            l.steel,
            l.indirect,
            l.financing,
            l.decommissioning,
            l.fuel_cycle,
            l.disposal,
            l.staffing,
            l.maintenance,
            l.capital_plant,
            l.fixed_om,
        ];
        for r in rates.into_iter().chain(self.ctc_accounts.iter().map(|a| a.learning_rate)) {
            if !(0.0..1.0).contains(&r) {
                return Err(EconError::LearningRateRange(r));
            }
        }
        for a in &self.ctc_accounts {
            if !(a.n_scale > 0.0 && a.n_scale <= 1.2) {
                return Err(EconError::ScaleExponentRange(a.n_scale));
            }
        }
        if !self.escalation_index.contains_key(&TARGET_DOLLAR_YEAR) {
            return Err(EconError::MissingEscalationYear(TARGET_DOLLAR_YEAR));
        }
        Ok(())
    }

    /// Scales every dollar amount by `factor`; fractions, exponents, and the
    /// escalation index are dimensionless and stay put.
    pub fn scale_costs(&mut self, factor: f64) {
        let fields: [&mut Money; 19] = [
            &mut self.natural_uranium_per_kgu,
            &mut self.conversion_per_kgu,
            &mut self.enrichment_per_swu,
            &mut self.fuel_fabrication_per_kgu,
            &mut self.spent_fuel_disposal_per_mwh,
            &mut self.decommissioning_per_kwe,
            &mut self.heat_pipe_each,
            &mut self.beryllium_per_kg,
            &mut self.b4c_enriched_per_kg,
            &mut self.b4c_natural_per_kg,
            &mut self.triso_per_kg,
            &mut self.yhx_per_kg,
            &mut self.graphite_per_kg,
            &mut self.structural_steel_per_kg,
            &mut self.drum_installation_each,
            &mut self.drum_fabrication_each,
            &mut self.labor_per_fte,
            &mut self.regulatory_fees_annual,
            &mut self.property_tax_insurance_annual,
        ];
        for m in fields {
            m.amount *= factor;
        }
        for a in &mut self.ctc_accounts {
            a.i_fixed.amount *= factor;
            a.i_ref.amount *= factor;
        }
    }
}

/// Baseline financing and availability assumptions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct FinanceAssumptions {
    pub discount_rate: f64,
    pub levelization_years: u32,
    pub debt_to_equity: f64,
    pub refueling_operators: u32,
    pub refueling_days: f64,
    pub emergency_shutdowns_per_year: f64,
    pub startup_after_refuel_days: f64,
    pub startup_after_emergency_days: f64,
    pub reactors_per_monitoring_operator: u32,
    pub security_staff_per_shift: u32,
    /// FTE per operator for a post-emergency startup campaign.
    pub emergency_fte_per_operator: f64,
    pub replacement_interval_years: f64,
    /// Build count the NOAK cost is quoted at.
    pub noak_units: u32,
    /// No further learning beyond this unit count.
    pub learning_saturation_units: u32,
}

impl Default for FinanceAssumptions {
    fn default() -> Self {
        Self {
            discount_rate: 0.06,
            levelization_years: 60,
            debt_to_equity: 0.5,
            refueling_operators: 2,
            refueling_days: 7.0,
            emergency_shutdowns_per_year: 0.2,
            startup_after_refuel_days: 2.0,
            startup_after_emergency_days: 14.0,
            reactors_per_monitoring_operator: 10,
            security_staff_per_shift: 1,
            emergency_fte_per_operator: 0.08,
            replacement_interval_years: 10.0,
            noak_units: 20,
            learning_saturation_units: 100,
        }
    }
}

/// FTE needed to staff one position around the clock.
pub const FTE_PER_CONTINUOUS_POST: f64 = 5.0;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EconError {
    #[error("assay ordering violated: need 0 < tails < feed <= product < 1")]
    AssayOrdering,
    #[error("non-starter design: lifetime {0} <= 0, no ledger")]
    NonStarter(f64),
    #[error("no escalation index for dollar-year {0}")]
    MissingEscalationYear(u32),
    #[error("discounted energy is zero")]
    ZeroDiscountedEnergy,
    #[error("discount rate must exceed -1, got {0}")]
    BadDiscountRate(f64),
    #[error("cost-to-capacity reference X_ref must be positive, got {0}")]
    BadScaleReference(f64),
    #[error("learning rate {0} outside [0, 1)")]
    LearningRateRange(f64),
    #[error("NOAK build count must be >= 1")]
    BadBuildCount,
    #[error("scaling exponent {0} outside (0, 1.2]")]
    ScaleExponentRange(f64),
    #[error("negative cost in account {0}")]
    NegativeCost(String),
    #[error("stream length mismatch: {0} vs {1}")]
    StreamLength(usize, usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_database_validates() {
        CostDatabase::default().validate().unwrap();
        let f = FinanceAssumptions::default();
        assert_eq!(f.levelization_years, 60);
        assert_eq!(f.discount_rate, 0.06);
    }

    #[test]
    fn bad_learning_rate_rejected() {
        let mut db = CostDatabase::default();
        db.learning.drums = 1.0;
        assert!(db.validate().is_err());
    }

    #[test]
    fn scale_costs_touches_every_money_field_once() {
        let mut db = CostDatabase::default();
        db.scale_costs(2.0);
        assert_eq!(db.natural_uranium_per_kgu.amount, 368.0);
        assert_eq!(db.enrichment_per_swu.amount, 368.4);
        assert_eq!(db.ctc_accounts[0].i_ref.amount, 16.0e6);
        // fractions untouched
        assert_eq!(db.indirect_cost_fraction, 0.35);
    }
}
