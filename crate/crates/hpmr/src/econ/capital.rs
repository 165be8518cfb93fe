//! Direct capital cost: material lines, the control-drum decomposition,
//! heat pipes, and cost-to-capacity scaled accounts.

use super::lcoe::escalate;
use super::{CostDatabase, EconError, ReflectorCostMode, ScalingVariable};
use crate::constants::ReactorConstants;
use crate::geometry::GeometrySpec;
use crate::inventory::MassInventory;

/// Cost-to-capacity scaling: I_fixed + I_ref * (X0/X_ref)^n.
pub fn cost_to_capacity(
    i_fixed: f64,
    i_ref: f64,
    x0: f64,
    x_ref: f64,
    n_scale: f64,
) -> Result<f64, EconError> {
    if x_ref <= 0.0 {
        return Err(EconError::BadScaleReference(x_ref));
    }
    Ok(i_fixed + i_ref * (x0 / x_ref).powf(n_scale))
}

/// Control-drum cost in $2024:
/// m_Be * C_Be + m_B4C * C_B4C + (I_installation + I_fabrication) * N_CD,
/// with the enriched-B4C price and each term escalated from its native year.
pub fn control_drum_cost(
    inventory: &MassInventory,
    db: &CostDatabase,
    drum_count: u32,
) -> Result<f64, EconError> {
    let be = escalate(
        inventory.be_drum_kg * db.beryllium_per_kg.amount,
        db.beryllium_per_kg.year,
        db,
    )?;
    let b4c = escalate(
        inventory.b4c_coating_kg * db.b4c_enriched_per_kg.amount,
        db.b4c_enriched_per_kg.year,
        db,
    )?;
    let per_drum = escalate(
        db.drum_installation_each.amount,
        db.drum_installation_each.year,
        db,
    )? + escalate(
        db.drum_fabrication_each.amount,
        db.drum_fabrication_each.year,
        db,
    )?;
    Ok(be + b4c + per_drum * f64::from(drum_count))
}

/// One direct capital line in $2024, before indirect and financing.
#[derive(Debug, Clone)]
pub struct DirectLine {
    pub name: String,
    pub cost_2024: f64,
    pub learning_rate: f64,
    /// Joins the decennial replacement annuity.
    pub replaced_decennially: bool,
}

/// Assembles every direct capital line for a design. The axial reflector is
/// priced per the reflector cost mode; all other unit costs come straight
/// from the database.
pub fn direct_capital_lines(
    geometry: &GeometrySpec,
    inventory: &MassInventory,
    constants: &ReactorConstants,
    db: &CostDatabase,
    mode: ReflectorCostMode,
) -> Result<Vec<DirectLine>, EconError> {
    let l = &db.learning;
    let mut lines = Vec::new();

    let refl_price = match mode {
        ReflectorCostMode::Be => db.beryllium_per_kg,
        ReflectorCostMode::Graphite => db.graphite_per_kg,
    };
    lines.push(DirectLine {
        name: "axial reflector".into(),
        cost_2024: escalate(
            inventory.be_axial_reflector_kg * refl_price.amount,
            refl_price.year,
            db,
        )?,
        learning_rate: l.axial_reflector,
        replaced_decennially: true,
    });

    let graphite = |kg: f64| -> Result<f64, EconError> {
        escalate(kg * db.graphite_per_kg.amount, db.graphite_per_kg.year, db)
    };
    let radial_kg = geometry.radial_reflector_m3 * constants.density.graphite * 1000.0;
    let monolith_kg = geometry.graphite_monolith_m3 * constants.density.graphite * 1000.0;
    lines.push(DirectLine {
        name: "radial reflector".into(),
        cost_2024: graphite(radial_kg)?,
        learning_rate: l.radial_reflector,
        replaced_decennially: true,
    });
    lines.push(DirectLine {
        name: "graphite monolith".into(),
        cost_2024: graphite(monolith_kg)?,
        learning_rate: l.monolith,
        replaced_decennially: false,
    });

    lines.push(DirectLine {
        name: "moderator (YHx)".into(),
        cost_2024: escalate(
            inventory.yhx_kg * db.yhx_per_kg.amount,
            db.yhx_per_kg.year,
            db,
        )?,
        learning_rate: l.yhx,
        replaced_decennially: true,
    });

    lines.push(DirectLine {
        name: "control drums".into(),
        cost_2024: control_drum_cost(inventory, db, constants.drum_count)?,
        learning_rate: l.drums,
        replaced_decennially: true,
    });

    lines.push(DirectLine {
        name: "heat pipes".into(),
        cost_2024: escalate(
            f64::from(constants.total_heat_pipes()) * db.heat_pipe_each.amount,
            db.heat_pipe_each.year,
            db,
        )?,
        learning_rate: l.heat_pipes,
        replaced_decennially: false,
    });

    lines.push(DirectLine {
        name: "initial core (TRISO compacts)".into(),
        cost_2024: escalate(
            inventory.triso_compact_kg * db.triso_per_kg.amount,
            db.triso_per_kg.year,
            db,
        )?,
        learning_rate: l.triso,
        replaced_decennially: false,
    });

    lines.push(DirectLine {
        name: "structural steel".into(),
        cost_2024: escalate(
            inventory.hp_steel_kg * db.structural_steel_per_kg.amount,
            db.structural_steel_per_kg.year,
            db,
        )?,
        learning_rate: l.steel,
        replaced_decennially: false,
    });

    let core_mass_kg = inventory.triso_compact_kg
        + inventory.yhx_kg
        + inventory.graphite_kg
        + inventory.be_axial_reflector_kg
        + inventory.be_drum_kg
        + inventory.b4c_coating_kg
        + inventory.hp_steel_kg;
    for acct in &db.ctc_accounts {
        let x0 = match acct.scaling {
            ScalingVariable::ThermalPowerMw => constants.thermal_power_mw,
            ScalingVariable::CoreMassKg => core_mass_kg,
        };
        let i_fixed = escalate(acct.i_fixed.amount, acct.i_fixed.year, db)?;
        let i_ref = escalate(acct.i_ref.amount, acct.i_ref.year, db)?;
        let cost = cost_to_capacity(i_fixed, i_ref, x0, acct.x_ref, acct.n_scale)?;
        lines.push(DirectLine {
            name: acct.name.clone(),
            cost_2024: cost,
            learning_rate: acct.learning_rate,
            replaced_decennially: acct.replaced_decennially,
        });
    }

    Ok(lines)
}

/// Overnight capital cost and total capital invested in $2024:
/// OCC = direct * (1 + indirect fraction), TCI = OCC * (1 + financing).
pub fn capital_cost(
    geometry: &GeometrySpec,
    inventory: &MassInventory,
    constants: &ReactorConstants,
    db: &CostDatabase,
    mode: ReflectorCostMode,
) -> Result<(f64, f64), EconError> {
    let direct: f64 = direct_capital_lines(geometry, inventory, constants, db, mode)?
        .iter()
        .map(|l| l.cost_2024)
        .sum();
    let occ = direct * (1.0 + db.indirect_cost_fraction);
    let tci = occ * (1.0 + db.financing_multiplier);
    Ok((occ, tci))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{validate, DesignPoint};
    use crate::geometry::derive_geometry;
    use crate::inventory::mass_inventory;

    /// Database with a flat escalation index: native amounts pass through.
    fn flat_db() -> CostDatabase {
        let mut db = CostDatabase::default();
        for v in db.escalation_index.values_mut() {
            *v = 1.0;
        }
        db
    }

    #[test]
    fn cost_to_capacity_identity_at_reference() {
        let c = cost_to_capacity(3.0, 7.0, 5.0, 5.0, 0.7).unwrap();
        assert!((c - 10.0).abs() < 1e-12);
    }

    #[test]
    fn cost_to_capacity_hand_value() {
        let c = cost_to_capacity(0.0, 1000.0, 2.0, 1.0, 0.7).unwrap();
        assert!((c - 1624.5047).abs() < 1e-3, "got {c}");
    }

    #[test]
    fn unit_exponent_reduces_to_linear_scaling() {
        let c = cost_to_capacity(0.0, 100.0, 7.0, 2.0, 1.0).unwrap();
        assert!((c - 350.0).abs() < 1e-12);
    }

    #[test]
    fn bad_reference_rejected() {
        assert!(cost_to_capacity(0.0, 1.0, 1.0, 0.0, 0.7).is_err());
    }

    #[test]
    fn drum_cost_line_item_sum() {
        // 100 kg Be, 10 kg B4C, 12 drums, flat escalation:
        // 100*45000 + 10*10064 + 404315*12 = 9,452,420
        let db = flat_db();
        let inv = MassInventory {
            triso_compact_kg: 0.0,
            yhx_kg: 0.0,
            graphite_kg: 0.0,
            be_axial_reflector_kg: 0.0,
            be_drum_kg: 100.0,
            b4c_coating_kg: 10.0,
            hp_steel_kg: 0.0,
            uranium_kg: 0.0,
            u235_kg: 0.0,
        };
        let c = control_drum_cost(&inv, &db, 12).unwrap();
        assert!((c - 9_452_420.0).abs() < 1e-6, "got {c}");
    }

    #[test]
    fn zero_masses_leave_per_drum_fixed_cost() {
        let db = flat_db();
        let inv = MassInventory {
            triso_compact_kg: 0.0,
            yhx_kg: 0.0,
            graphite_kg: 0.0,
            be_axial_reflector_kg: 0.0,
            be_drum_kg: 0.0,
            b4c_coating_kg: 0.0,
            hp_steel_kg: 0.0,
            uranium_kg: 0.0,
            u235_kg: 0.0,
        };
        let c = control_drum_cost(&inv, &db, 12).unwrap();
        assert!((c - 404_315.0 * 12.0).abs() < 1e-6);
    }

    #[test]
    fn drum_cost_increases_with_fuel_height() {
        // drum height tracks fuel height, so taller cores carry more drum mass
        let c = ReactorConstants::default();
        let db = CostDatabase::default();
        let cost_at = |fh: f64| {
            let d = validate(DesignPoint {
                fuel_height_cm: fh,
                ..DesignPoint::nominal()
            })
            .unwrap();
            let g = derive_geometry(&d, &c);
            control_drum_cost(&mass_inventory(&g, &d, &c), &db, c.drum_count).unwrap()
        };
        assert!(cost_at(170.0) > cost_at(150.0));
    }

    #[test]
    fn heat_pipe_line_counts_all_pipes() {
        let c = ReactorConstants::default();
        let db = flat_db();
        let d = validate(DesignPoint::nominal()).unwrap();
        let g = derive_geometry(&d, &c);
        let inv = mass_inventory(&g, &d, &c);
        let lines = direct_capital_lines(&g, &inv, &c, &db, ReflectorCostMode::Be).unwrap();
        let hp = lines.iter().find(|l| l.name == "heat pipes").unwrap();
        assert!((hp.cost_2024 - 1110.0 * 10_000.0).abs() < 1e-6);
    }

    #[test]
    fn all_zero_unit_costs_give_zero_direct_cost() {
        let c = ReactorConstants::default();
        let mut db = flat_db();
        db.scale_costs(0.0);
        let d = validate(DesignPoint::nominal()).unwrap();
        let g = derive_geometry(&d, &c);
        let inv = mass_inventory(&g, &d, &c);
        let lines = direct_capital_lines(&g, &inv, &c, &db, ReflectorCostMode::Be).unwrap();
        let total: f64 = lines.iter().map(|l| l.cost_2024).sum();
        assert_eq!(total, 0.0);
    }

    #[test]
    fn occ_and_tci_compose_from_direct_cost() {
        let c = ReactorConstants::default();
        let db = flat_db();
        let d = validate(DesignPoint::nominal()).unwrap();
        let g = derive_geometry(&d, &c);
        let inv = mass_inventory(&g, &d, &c);
        let direct: f64 = direct_capital_lines(&g, &inv, &c, &db, ReflectorCostMode::Be)
            .unwrap()
            .iter()
            .map(|l| l.cost_2024)
            .sum();
        let (occ, tci) = capital_cost(&g, &inv, &c, &db, ReflectorCostMode::Be).unwrap();
        assert!((occ - direct * 1.35).abs() < 1e-6);
        assert!((tci - occ * 1.2).abs() < 1e-6);
        // zero unit costs zero everything
        let mut zero = flat_db();
        zero.scale_costs(0.0);
        let (occ0, tci0) = capital_cost(&g, &inv, &c, &zero, ReflectorCostMode::Be).unwrap();
        assert_eq!((occ0, tci0), (0.0, 0.0));
    }

    #[test]
    fn reflector_price_difference_between_modes() {
        let c = ReactorConstants::default();
        let db = flat_db();
        let d = validate(DesignPoint::nominal()).unwrap();
        let g = derive_geometry(&d, &c);
        let inv = mass_inventory(&g, &d, &c);
        let line = |mode| {
            direct_capital_lines(&g, &inv, &c, &db, mode)
                .unwrap()
                .into_iter()
                .find(|l| l.name == "axial reflector")
                .unwrap()
                .cost_2024
        };
        let be = line(ReflectorCostMode::Be);
        let gr = line(ReflectorCostMode::Graphite);
        let expect = inv.be_axial_reflector_kg * (45_000.0 - 80.0);
        assert!((be - gr - expect).abs() < 1e-6);
    }
}
