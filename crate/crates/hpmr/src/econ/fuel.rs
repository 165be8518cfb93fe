//! Fuel-cycle cost: SWU mass balance priced per reload, charged at the start
//! of each irradiation cycle.

use super::lcoe::escalate;
use super::swu::swu_per_kg_product;
use super::{CostDatabase, EconError, FinanceAssumptions};
use crate::inventory::MassInventory;

/// Feed assay for natural uranium.
pub const NATURAL_URANIUM_ASSAY: f64 = 0.0071;
/// Tails assay assumed by the enrichment mass balance.
pub const TAILS_ASSAY: f64 = 0.0025;

/// Fuel-cycle cost result: one reload's cost and where the reloads land on
/// the levelization timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FuelCycle {
    /// Cost of one full reload in $2024.
    pub per_cycle_cost_2024: f64,
    /// Cycle length driving the reload schedule (years); the lifetime capped
    /// at the replacement interval.
    pub cycle_years: f64,
    /// Years (1-indexed into the levelization horizon) charged with a reload.
    /// The first core is capitalized, so reloads start at the end of cycle 1.
    pub reload_years: Vec<u32>,
}

/// Prices one reload and lays out the reload schedule.
///
/// Per-kg cost: feed * natural-U price + feed * conversion
/// + SWU * SWU price * penalty + fabrication, each escalated to $2024,
/// multiplied by the heavy-metal mass. The enrichment assay is the U-235
/// fraction implied by the inventory.
pub fn fuel_cycle_cost(
    masses: &MassInventory,
    lifetime_years: f64,
    db: &CostDatabase,
    fin: &FinanceAssumptions,
) -> Result<FuelCycle, EconError> {
    if lifetime_years <= 0.0 {
        return Err(EconError::NonStarter(lifetime_years));
    }
    let enrichment = if masses.uranium_kg > 0.0 {
        masses.u235_kg / masses.uranium_kg
    } else {
        NATURAL_URANIUM_ASSAY
    };
    let assays = swu_per_kg_product(enrichment, NATURAL_URANIUM_ASSAY, TAILS_ASSAY)?;

    let feed = escalate(
        assays.feed_per_kg * db.natural_uranium_per_kgu.amount,
        db.natural_uranium_per_kgu.year,
        db,
    )?;
    let conversion = escalate(
        assays.feed_per_kg * db.conversion_per_kgu.amount,
        db.conversion_per_kgu.year,
        db,
    )?;
    let enrichment_cost = escalate(
        assays.swu_per_kg * db.enrichment_per_swu.amount * db.enrichment_penalty,
        db.enrichment_per_swu.year,
        db,
    )?;
    let fabrication = escalate(
        db.fuel_fabrication_per_kgu.amount,
        db.fuel_fabrication_per_kgu.year,
        db,
    )?;
    let per_kg = feed + conversion + enrichment_cost + fabrication;

    let cycle_years = lifetime_years.min(fin.replacement_interval_years);
    let mut reload_years = Vec::new();
    let mut k = 1u32;
    loop {
        let t = (f64::from(k) * cycle_years).ceil() as u32;
        if t > fin.levelization_years {
            break;
        }
        reload_years.push(t.max(1));
        k += 1;
    }

    Ok(FuelCycle {
        per_cycle_cost_2024: masses.uranium_kg * per_kg,
        cycle_years,
        reload_years,
    })
}
