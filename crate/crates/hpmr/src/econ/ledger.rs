//! Full per-design cost ledger: every account's discounted contribution,
//! the FOAK LCOE, and the per-account NOAK projection.

use super::capacity::capacity_factor;
use super::capital::direct_capital_lines;
use super::fuel::fuel_cycle_cost;
use super::lcoe::{annuity_factor, escalate, lcoe};
use super::om::om_lines;
use super::{CostDatabase, EconError, FinanceAssumptions, ReflectorCostMode, HOURS_PER_YEAR};
use crate::constants::ReactorConstants;
use crate::design::ValidatedDesign;
use crate::geometry::derive_geometry;
use crate::inventory::mass_inventory;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccountGroup {
    Fuel,
    OandM,
    Capital,
}

impl std::fmt::Display for AccountGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Fuel => write!(f, "fuel"),
            Self::OandM => write!(f, "om"),
            Self::Capital => write!(f, "capital"),
        }
    }
}

/// One ledger account with its discounted contribution and learning.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AccountLine {
    pub name: String,
    pub group: AccountGroup,
    /// Present value over the levelization period ($2024).
    pub npv_2024: f64,
    /// Equivalent uniform annual cost ($2024/year).
    pub annualized_2024: f64,
    /// FOAK LCOE contribution ($/MWh).
    pub lcoe_share: f64,
    /// NOAK LCOE contribution after learning ($/MWh).
    pub noak_share: f64,
    pub learning_rate: f64,
}

/// The complete costing result for one design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostLedger {
    pub accounts: Vec<AccountLine>,
    pub capacity_factor: f64,
    /// Net electric energy per operating year (MWh).
    pub annual_energy_mwh: f64,
    pub discounted_energy_mwh: f64,
    pub direct_cost_2024: f64,
    pub occ_2024: f64,
    pub tci_2024: f64,
    pub foak_lcoe: f64,
    pub noak_lcoe: f64,
    pub lifetime_years: f64,
    pub cycle_years: f64,
}

impl CostLedger {
    pub fn group_total(&self, group: AccountGroup) -> f64 {
        self.accounts
            .iter()
            .filter(|a| a.group == group)
            .map(|a| a.lcoe_share)
            .sum()
    }

    pub fn account(&self, name: &str) -> Option<&AccountLine> {
        self.accounts.iter().find(|a| a.name == name)
    }
}

/// Builds the ledger for a design whose lifetime is already known.
/// Non-starters (lifetime <= 0) get no ledger.
pub fn build_ledger(
    design: &ValidatedDesign,
    lifetime_years: f64,
    mode: ReflectorCostMode,
    constants: &ReactorConstants,
    db: &CostDatabase,
    fin: &FinanceAssumptions,
) -> Result<CostLedger, EconError> {
    if lifetime_years <= 0.0 {
        return Err(EconError::NonStarter(lifetime_years));
    }
    let geometry = derive_geometry(design, constants);
    let inventory = mass_inventory(&geometry, design, constants);

    let r = fin.discount_rate;
    if r <= -1.0 {
        return Err(EconError::BadDiscountRate(r));
    }
    let n = fin.levelization_years;
    let af = annuity_factor(r, n);

    let cf = capacity_factor(lifetime_years, fin);
    let annual_energy = constants.electric_power_mw() * HOURS_PER_YEAR * cf;
    let energy_npv = annual_energy * af;
    if energy_npv <= 0.0 {
        return Err(EconError::ZeroDiscountedEnergy);
    }

    let direct = direct_capital_lines(&geometry, &inventory, constants, db, mode)?;
    let direct_total: f64 = direct.iter().map(|d| d.cost_2024).sum();
    let indirect = db.indirect_cost_fraction * direct_total;
    let occ = direct_total + indirect;
    let financing = db.financing_multiplier * occ;
    let tci = occ + financing;
    let decommissioning = escalate(
        db.decommissioning_per_kwe.amount * constants.electric_power_mw() * 1000.0,
        db.decommissioning_per_kwe.year,
        db,
    )?;

    let om = om_lines(&direct, db, fin)?;
    let fuel = fuel_cycle_cost(&inventory, lifetime_years, db, fin)?;
    let disposal_annual = escalate(
        db.spent_fuel_disposal_per_mwh.amount * annual_energy,
        db.spent_fuel_disposal_per_mwh.year,
        db,
    )?;

    let mut accounts = Vec::new();
    let mut push = |name: String, group: AccountGroup, npv: f64, lr: f64| {
        accounts.push(AccountLine {
            name,
            group,
            npv_2024: npv,
            annualized_2024: npv / af,
            lcoe_share: npv / energy_npv,
            noak_share: 0.0,
            learning_rate: lr,
        });
    };

    for line in &direct {
        push(line.name.clone(), AccountGroup::Capital, line.cost_2024, line.learning_rate);
    }
    push(
        "indirect capital".into(),
        AccountGroup::Capital,
        indirect,
        db.learning.indirect,
    );
    push(
        "capitalized financing".into(),
        AccountGroup::Capital,
        financing,
        db.learning.financing,
    );
    push(
        "decommissioning".into(),
        AccountGroup::Capital,
        decommissioning,
        db.learning.decommissioning,
    );

    for line in &om {
        push(
            line.name.clone(),
            AccountGroup::OandM,
            line.annual_2024 * af,
            line.learning_rate,
        );
    }

    let reload_discount: f64 = fuel
        .reload_years
        .iter()
        .map(|&t| (1.0 + r).powi(-(t as i32)))
        .sum();
    push(
        "fuel reloads".into(),
        AccountGroup::Fuel,
        fuel.per_cycle_cost_2024 * reload_discount,
        db.learning.fuel_cycle,
    );
    push(
        "spent fuel disposal".into(),
        AccountGroup::Fuel,
        disposal_annual * af,
        db.learning.disposal,
    );

    for a in &accounts {
        if a.npv_2024 < 0.0 {
            return Err(EconError::NegativeCost(a.name.clone()));
        }
    }

    let foak: f64 = accounts.iter().map(|a| a.lcoe_share).sum();
    let learn_n = f64::from(fin.noak_units.min(fin.learning_saturation_units));
    for a in &mut accounts {
        a.noak_share = a.lcoe_share * (1.0 - a.learning_rate).powf(learn_n.log2());
    }
    let noak_total: f64 = accounts.iter().map(|a| a.noak_share).sum();

    Ok(CostLedger {
        accounts,
        capacity_factor: cf,
        annual_energy_mwh: annual_energy,
        discounted_energy_mwh: energy_npv,
        direct_cost_2024: direct_total,
        occ_2024: occ,
        tci_2024: tci,
        foak_lcoe: foak,
        noak_lcoe: noak_total,
        lifetime_years,
        cycle_years: fuel.cycle_years,
    })
}

/// Assembles the year-indexed streams and recomputes the FOAK LCOE through
/// the direct discounted-cash-flow route. Kept as a second route for the
/// ledger's own account summation.
pub fn foak_lcoe_via_streams(
    ledger: &CostLedger,
    db: &CostDatabase,
    fin: &FinanceAssumptions,
) -> Result<f64, EconError> {
    let n = fin.levelization_years as usize;
    let mut fuel_stream = vec![0.0; n + 1];
    let mut om_stream = vec![0.0; n + 1];
    let mut energy = vec![0.0; n + 1];
    let mut tci = 0.0;

    for a in &ledger.accounts {
        match a.group {
            AccountGroup::Capital => tci += a.npv_2024,
            AccountGroup::OandM => {
                // annual, uniform
                let annual = a.annualized_2024;
                for t in 1..=n {
                    om_stream[t] += annual;
                }
            }
            AccountGroup::Fuel => {
                if a.name == "fuel reloads" {
                    // reconstruct the reload placement from the cycle length
                    let mut k = 1u32;
                    loop {
                        let t = (f64::from(k) * ledger.cycle_years).ceil() as usize;
                        if t > n {
                            break;
                        }
                        k += 1;
                        fuel_stream[t] += 1.0;
                    }
                    let count: f64 = fuel_stream.iter().sum();
                    if count > 0.0 {
                        // spread the NPV back onto the events with equal
                        // per-event cost
                        let per_event_npv: f64 = (1..=n)
                            .filter(|&t| fuel_stream[t] > 0.0)
                            .map(|t| (1.0 + fin.discount_rate).powi(-(t as i32)))
                            .sum();
                        let per_cycle = a.npv_2024 / per_event_npv;
                        for t in 1..=n {
                            fuel_stream[t] = if fuel_stream[t] > 0.0 { per_cycle } else { 0.0 };
                        }
                    }
                } else {
                    let annual = a.annualized_2024;
                    for t in 1..=n {
                        fuel_stream[t] += annual;
                    }
                }
            }
        }
    }
    for t in 1..=n {
        energy[t] = ledger.annual_energy_mwh;
    }
    let _ = db;
    lcoe(
        &fuel_stream,
        &om_stream,
        tci,
        &energy,
        fin.discount_rate,
        fin.levelization_years,
    )
}

/// Burnup in GWd per tonne of heavy metal: Q * lifetime_days / tHM / 1000.
pub fn burnup_gwd_per_thm(
    constants: &ReactorConstants,
    lifetime_years: f64,
    uranium_kg: f64,
) -> f64 {
    let days = lifetime_years * 365.25;
    constants.thermal_power_mw * days / (uranium_kg / 1000.0) / 1000.0
}

/// Machine-readable ledger rendering.
pub fn ledger_csv(ledger: &CostLedger) -> String {
    let mut out = String::from("account,group,annualized_cost_usd2024,lcoe_share_usd_per_mwh\n");
    for a in &ledger.accounts {
        out.push_str(&format!(
            "{},{},{:.2},{:.6}\n",
            a.name, a.group, a.annualized_2024, a.lcoe_share
        ));
    }
    out
}

/// Human-readable ledger table with group subtotals.
pub fn ledger_text(ledger: &CostLedger) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<38} {:>10} {:>16} {:>14}\n",
        "account", "group", "annualized $/y", "LCOE $/MWh"
    ));
    out.push_str(&"-".repeat(82));
    out.push('\n');
    for a in &ledger.accounts {
        out.push_str(&format!(
            "{:<38} {:>10} {:>16.0} {:>14.2}\n",
            a.name,
            a.group.to_string(),
            a.annualized_2024,
            a.lcoe_share
        ));
    }
    out.push_str(&"-".repeat(82));
    out.push('\n');
    for (label, group) in [
        ("fuel", AccountGroup::Fuel),
        ("O&M", AccountGroup::OandM),
        ("capital", AccountGroup::Capital),
    ] {
        out.push_str(&format!(
            "{:<38} {:>10} {:>16} {:>14.2}\n",
            format!("total {label}"),
            "",
            "",
            ledger.group_total(group)
        ));
    }
    out.push_str(&format!(
        "\ncapacity factor        {:>10.4}\nannual energy (MWhe)   {:>10.1}\nFOAK LCOE ($2024/MWh)  {:>10.2}\nNOAK LCOE ($2024/MWh)  {:>10.2}\n",
        ledger.capacity_factor, ledger.annual_energy_mwh, ledger.foak_lcoe, ledger.noak_lcoe
    ));
    out
}
