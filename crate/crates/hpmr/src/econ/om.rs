//! Annual operation and maintenance lines: staffing, decennial replacement
//! annuity, maintenance and capital-plant fractions, and fixed pass-throughs.

use super::capital::DirectLine;
use super::lcoe::escalate;
use super::{CostDatabase, EconError, FinanceAssumptions, FTE_PER_CONTINUOUS_POST};

/// One annually recurring O&M line in $2024/year.
#[derive(Debug, Clone)]
pub struct OmLine {
    pub name: String,
    pub annual_2024: f64,
    pub learning_rate: f64,
}

/// Builds the annual O&M lines.
///
/// Staffing: security posted 24/7, remote monitoring shared across a fleet,
/// and operators called out for post-emergency startups. Replacements: the
/// components flagged for decennial replacement contribute their direct cost
/// over the replacement interval. Other maintenance runs at a fraction of the
/// direct cost, capital plant expenditures at another; regulatory fees and
/// property tax/insurance pass through unchanged.
pub fn om_lines(
    direct_lines: &[DirectLine],
    db: &CostDatabase,
    fin: &FinanceAssumptions,
) -> Result<Vec<OmLine>, EconError> {
    let l = &db.learning;
    let labor = escalate(db.labor_per_fte.amount, db.labor_per_fte.year, db)?;
    let mut lines = Vec::new();

    let security_fte = FTE_PER_CONTINUOUS_POST * f64::from(fin.security_staff_per_shift);
    lines.push(OmLine {
        name: "security staffing".into(),
        annual_2024: security_fte * labor,
        learning_rate: l.staffing,
    });

    let monitoring_fte =
        FTE_PER_CONTINUOUS_POST / f64::from(fin.reactors_per_monitoring_operator);
    lines.push(OmLine {
        name: "remote monitoring".into(),
        annual_2024: monitoring_fte * labor,
        learning_rate: l.staffing,
    });

    // scaled on emergencies relative to the 0.2/year baseline behind the
    // 0.08 FTE estimate
    let emergency_scale = fin.emergency_shutdowns_per_year / 0.2;
    lines.push(OmLine {
        name: "emergency startup operations".into(),
        annual_2024: f64::from(fin.refueling_operators)
            * fin.emergency_fte_per_operator
            * labor
            * emergency_scale,
        learning_rate: l.staffing,
    });

    for line in direct_lines.iter().filter(|d| d.replaced_decennially) {
        lines.push(OmLine {
            name: format!("replacement: {}", line.name),
            annual_2024: line.cost_2024 / fin.replacement_interval_years,
            learning_rate: line.learning_rate,
        });
    }

    let direct_total: f64 = direct_lines.iter().map(|d| d.cost_2024).sum();
    lines.push(OmLine {
        name: "other maintenance".into(),
        annual_2024: db.maintenance_fraction * direct_total,
        learning_rate: l.maintenance,
    });
    lines.push(OmLine {
        name: "capital plant expenditures".into(),
        annual_2024: db.capital_plant_expenditure_fraction * direct_total,
        learning_rate: l.capital_plant,
    });

    lines.push(OmLine {
        name: "regulatory fees".into(),
        annual_2024: escalate(
            db.regulatory_fees_annual.amount,
            db.regulatory_fees_annual.year,
            db,
        )?,
        learning_rate: l.fixed_om,
    });
    lines.push(OmLine {
        name: "property tax and insurance".into(),
        annual_2024: escalate(
            db.property_tax_insurance_annual.amount,
            db.property_tax_insurance_annual.year,
            db,
        )?,
        learning_rate: l.fixed_om,
    });

    Ok(lines)
}
