//! Capacity factor from the availability assumptions.

use super::FinanceAssumptions;

const DAYS_PER_YEAR: f64 = 365.25;

/// Capacity factor in (0, 1]:
///
/// C_f = (1 - emergency_rate * emergency_startup_days / 365.25)
///       * L_d / (L_d + refueling_days + startup_days),
///
/// with L_d the cycle length in days, capped at the replacement interval
/// since maintenance forces a refueling outage then anyway.
pub fn capacity_factor(lifetime_years: f64, fin: &FinanceAssumptions) -> f64 {
    assert!(lifetime_years > 0.0, "capacity factor needs a positive lifetime");
    let cycle_days =
        lifetime_years.min(fin.replacement_interval_years) * DAYS_PER_YEAR;
    let emergency_loss = fin.emergency_shutdowns_per_year * fin.startup_after_emergency_days
        / DAYS_PER_YEAR;
    (1.0 - emergency_loss) * cycle_days
        / (cycle_days + fin.refueling_days + fin.startup_after_refuel_days)
}
