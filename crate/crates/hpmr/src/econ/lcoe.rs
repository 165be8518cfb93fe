//! Escalation, discounting, the FOAK LCOE ratio, and the NOAK learning curve.

use super::{CostDatabase, EconError, TARGET_DOLLAR_YEAR};

/// Escalates `amount` from its native dollar-year to $2024 using the index
/// table: amount * index(2024)/index(from_year).
pub fn escalate(amount: f64, from_year: u32, db: &CostDatabase) -> Result<f64, EconError> {
    let from = db
        .escalation_index
        .get(&from_year)
        .ok_or(EconError::MissingEscalationYear(from_year))?;
    let to = db
        .escalation_index
        .get(&TARGET_DOLLAR_YEAR)
        .ok_or(EconError::MissingEscalationYear(TARGET_DOLLAR_YEAR))?;
    Ok(amount * to / from)
}

/// Levelized cost of electricity over years t = 0..=n:
///
/// LCOE = sum_t (F_t + O_t + TCI_t)/(1+r)^t / sum_t E_t/(1+r)^t,
///
/// where TCI enters only at t = 0 and E_0 = 0. The fuel and O&M slices are
/// indexed by year with entry 0 for t = 0.
pub fn lcoe(
    fuel: &[f64],
    om: &[f64],
    tci: f64,
    energy: &[f64],
    discount_rate: f64,
    years: u32,
) -> Result<f64, EconError> {
    if discount_rate <= -1.0 {
        return Err(EconError::BadDiscountRate(discount_rate));
    }
    let n = years as usize + 1;
    for (len, other) in [(fuel.len(), n), (om.len(), n), (energy.len(), n)] {
        if len != other {
            return Err(EconError::StreamLength(len, other));
        }
    }
    let mut cost_npv = tci;
    let mut energy_npv = 0.0;
    for t in 0..n {
        let disc = (1.0 + discount_rate).powi(t as i32);
        cost_npv += (fuel[t] + om[t]) / disc;
        if t > 0 {
            energy_npv += energy[t] / disc;
        }
    }
    if energy_npv <= 0.0 {
        return Err(EconError::ZeroDiscountedEnergy);
    }
    Ok(cost_npv / energy_npv)
}

/// Present-worth annuity factor: sum_{t=1..=n} (1+r)^-t.
pub fn annuity_factor(discount_rate: f64, years: u32) -> f64 {
    (1..=years)
        .map(|t| (1.0 + discount_rate).powi(-(t as i32)))
        .sum()
}

/// NOAK cost after `n_units` builds: FOAK * (1 - lr)^log2(min(n, saturation)),
/// with no further learning past the saturation unit.
pub fn noak(foak: f64, learning_rate: f64, n_units: u32, saturation_units: u32) -> Result<f64, EconError> {
    if n_units < 1 {
        return Err(EconError::BadBuildCount);
    }
    if !(0.0..1.0).contains(&learning_rate) {
        return Err(EconError::LearningRateRange(learning_rate));
    }
    let n = f64::from(n_units.min(saturation_units));
    Ok(foak * (1.0 - learning_rate).powf(n.log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn escalation_identity_for_target_year() {
        let db = CostDatabase::default();
        assert_eq!(escalate(123.45, 2024, &db).unwrap(), 123.45);
    }

    #[test]
    fn escalation_is_an_index_ratio() {
        let mut db = CostDatabase::default();
        db.escalation_index.clear();
        db.escalation_index.insert(2009, 1.00);
        db.escalation_index.insert(2024, 1.45);
        assert!((escalate(100.0, 2009, &db).unwrap() - 145.0).abs() < 1e-12);
    }

    #[test]
    fn missing_year_is_an_error() {
        let db = CostDatabase::default();
        assert_eq!(
            escalate(1.0, 1999, &db),
            Err(EconError::MissingEscalationYear(1999))
        );
    }

    #[test]
    fn escalation_is_linear() {
        let db = CostDatabase::default();
        let a = escalate(70.0, 2009, &db).unwrap();
        let b = escalate(30.0, 2009, &db).unwrap();
        let ab = escalate(100.0, 2009, &db).unwrap();
        assert!((a + b - ab).abs() < 1e-9);
    }

    #[test]
    fn undiscounted_constant_streams_reduce_to_cost_over_energy() {
        let n = 10u32;
        let fuel = vec![3.0; 11];
        let om = vec![7.0; 11];
        let mut energy = vec![100.0; 11];
        energy[0] = 0.0;
        // r = 0, TCI = 0: ((3+7)*11 yrs incl t=0) / (100*10)
        let v = lcoe(&fuel, &om, 0.0, &energy, 0.0, n).unwrap();
        assert!((v - (10.0 * 11.0) / 1000.0).abs() < 1e-12);
    }

    #[test]
    fn tci_only_two_year_hand_discounting() {
        // TCI = 1000, E = 100 for t = 1..2, r = 0.06:
        // 1000/(100/1.06 + 100/1.06^2) = 5.454
        let fuel = vec![0.0; 3];
        let om = vec![0.0; 3];
        let energy = vec![0.0, 100.0, 100.0];
        let v = lcoe(&fuel, &om, 1000.0, &energy, 0.06, 2).unwrap();
        let oracle = 1000.0 / (100.0 / 1.06 + 100.0 / (1.06f64 * 1.06));
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 5.454).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn zero_energy_is_an_error() {
        let v = lcoe(&[0.0, 0.0], &[0.0, 0.0], 1.0, &[0.0, 0.0], 0.06, 1);
        assert_eq!(v, Err(EconError::ZeroDiscountedEnergy));
    }

    #[test]
    fn lcoe_strictly_decreasing_in_energy() {
        let fuel = vec![1.0; 11];
        let om = vec![2.0; 11];
        let mut e1 = vec![50.0; 11];
        e1[0] = 0.0;
        let mut e2 = vec![60.0; 11];
        e2[0] = 0.0;
        let v1 = lcoe(&fuel, &om, 100.0, &e1, 0.06, 10).unwrap();
        let v2 = lcoe(&fuel, &om, 100.0, &e2, 0.06, 10).unwrap();
        assert!(v2 < v1);
    }

    #[test]
    fn noak_identity_at_one_unit() {
        assert_eq!(noak(100.0, 0.3, 1, 100).unwrap(), 100.0);
    }

    #[test]
    fn noak_two_doublings() {
        let v = noak(1.0, 0.1, 4, 100).unwrap();
        assert!((v - 0.81).abs() < 1e-12);
    }

    #[test]
    fn noak_saturates_at_unit_cap() {
        let a = noak(1.0, 0.2, 200, 100).unwrap();
        let b = noak(1.0, 0.2, 100, 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noak_rejects_bad_inputs() {
        assert!(noak(1.0, 1.0, 10, 100).is_err());
        assert!(noak(1.0, 0.5, 0, 100).is_err());
    }

    proptest! {
        #[test]
        fn lcoe_homogeneous_in_costs(scale in 0.1..10.0f64, f in 0.0..5.0f64,
                                     o in 0.0..5.0f64, tci in 0.0..100.0f64) {
            let n = 5u32;
            let fuel = vec![f; 6];
            let om = vec![o; 6];
            let mut energy = vec![10.0; 6];
            energy[0] = 0.0;
            let base = lcoe(&fuel, &om, tci, &energy, 0.06, n).unwrap();
            let fuel2: Vec<f64> = fuel.iter().map(|v| v * scale).collect();
            let om2: Vec<f64> = om.iter().map(|v| v * scale).collect();
            let scaled = lcoe(&fuel2, &om2, tci * scale, &energy, 0.06, n).unwrap();
            prop_assert!((scaled - scale * base).abs() <= 1e-9 * base.abs().max(1.0) * scale.max(1.0));
        }
    }
}
