//! Heat-flux and peaking-factor operations on compact power fields.
//!
//! A power field is one slice per compact, each holding the linear power in
//! the compact's axial tally nodes (20 in the bundled model).

use super::PhysicsError;
use crate::constants::ReactorConstants;
use crate::design::ValidatedDesign;

/// Average compact surface heat flux (MW/m^2):
/// q''_avg = Q / (N_flakes * N_compact * L * 2*pi*r), with L and r in meters.
pub fn avg_heat_flux(design: &ValidatedDesign, constants: &ReactorConstants) -> f64 {
    let length_m = design.fuel_height_cm / 100.0;
    let radius_m = design.compact_radius_cm / 100.0;
    constants.thermal_power_mw
        / (constants.total_compacts() * length_m * 2.0 * std::f64::consts::PI * radius_m)
}

/// Peak heat flux: q''_max = F_q * q''_avg.
pub fn peak_heat_flux(f_q: f64, q_avg: f64) -> Result<f64, PhysicsError> {
    if f_q < 1.0 {
        return Err(PhysicsError::PeakingBelowOne(f_q));
    }
    Ok(f_q * q_avg)
}

fn check_field(compact_axial_powers: &[Vec<f64>]) -> Result<usize, PhysicsError> {
    let Some(first) = compact_axial_powers.first() else {
        return Err(PhysicsError::EmptyPowerField);
    };
    let nodes = first.len();
    if nodes == 0 {
        return Err(PhysicsError::EmptyPowerField);
    }
    let mut any_positive = false;
    for compact in compact_axial_powers {
        if compact.len() != nodes {
            return Err(PhysicsError::RaggedPowerField);
        }
        for &p in compact {
            if p < 0.0 || !p.is_finite() {
                return Err(PhysicsError::NegativePower);
            }
            any_positive |= p > 0.0;
        }
    }
    if !any_positive {
        return Err(PhysicsError::AllZeroPowerField);
    }
    Ok(nodes)
}

/// Rod-integrated peaking factor: the maximum axially integrated compact
/// power over the compact-average integrated power.
pub fn f_delta_h(compact_axial_powers: &[Vec<f64>]) -> Result<f64, PhysicsError> {
    check_field(compact_axial_powers)?;
    let integrals: Vec<f64> = compact_axial_powers
        .iter()
        .map(|c| c.iter().sum::<f64>())
        .collect();
    let max = integrals.iter().cloned().fold(f64::MIN, f64::max);
    let mean = integrals.iter().sum::<f64>() / integrals.len() as f64;
    Ok(max / mean)
}

/// Node peaking factor: the maximum single-node linear power over the
/// core-average node linear power.
pub fn f_q(compact_axial_powers: &[Vec<f64>]) -> Result<f64, PhysicsError> {
    let nodes = check_field(compact_axial_powers)?;
    let mut max = f64::MIN;
    let mut sum = 0.0;
    for compact in compact_axial_powers {
        for &p in compact {
            max = max.max(p);
            sum += p;
        }
    }
    let mean = sum / (compact_axial_powers.len() * nodes) as f64;
    Ok(max / mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{validate, DesignPoint};

    #[test]
    fn nominal_average_heat_flux() {
        let q = avg_heat_flux(
            &validate(DesignPoint::nominal()).unwrap(),
            &ReactorConstants::default(),
        );
        // formula value 0.010526, within 0.15% of the reported 0.010536
        assert!((q - 0.010526).abs() < 1e-6, "q_avg {q}");
        assert!((q / 0.010536 - 1.0).abs() < 0.0015);
    }

    #[test]
    fn tall_wide_compact_heat_flux() {
        let d = validate(DesignPoint {
            fuel_height_cm: 190.0,
            pin_pitch_cm: 2.20,
            compact_radius_cm: 1.10,
            moderator_radius_cm: 0.75,
            coating_angle_deg: 91.0,
            b10_fraction: 0.53,
            enrichment: 0.199,
        })
        .unwrap();
        let q = avg_heat_flux(&d, &ReactorConstants::default());
        assert!((q / 0.00806 - 1.0).abs() < 0.005, "q_avg {q}");
    }

    #[test]
    fn doubling_compact_radius_halves_average_flux() {
        let c = ReactorConstants::default();
        let d1 = validate(DesignPoint::nominal()).unwrap();
        let d2 = validate(DesignPoint {
            compact_radius_cm: 1.15, // pp/2 cap keeps us in bounds
            ..DesignPoint::nominal()
        })
        .unwrap();
        let q1 = avg_heat_flux(&d1, &c);
        let q2 = avg_heat_flux(&d2, &c);
        assert!((q1 / q2 - 1.15).abs() < 1e-12);
    }

    #[test]
    fn peak_heat_flux_is_a_plain_product() {
        let q = peak_heat_flux(1.787, 0.010526).unwrap();
        assert!((q - 0.0188).abs() < 1e-4, "q_max {q}");
        assert_eq!(peak_heat_flux(1.0, 0.0123).unwrap(), 0.0123);
        let q = peak_heat_flux(1.373 * 1.480, 0.010526).unwrap(); // graphite-solution scale
        assert!(q > 0.02);
        assert!(peak_heat_flux(0.9, 1.0).is_err());
    }

    #[test]
    fn uniform_field_has_unit_peaking() {
        let field = vec![vec![2.5; 20]; 4];
        assert!((f_delta_h(&field).unwrap() - 1.0).abs() < 1e-12);
        assert!((f_q(&field).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_compact_integral_ratio() {
        // integrals {2, 1} -> 2 / 1.5
        let field = vec![vec![0.1; 20], vec![0.05; 20]];
        assert!((f_delta_h(&field).unwrap() - 2.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn single_hot_node_from_brute_force() {
        // one node at 2x in an otherwise uniform 2x20 field; brute force over
        // all 40 nodes gives max/mean = 2 / (41/40)
        let mut field = vec![vec![1.0; 20]; 2];
        field[0][7] = 2.0;
        let mut max: f64 = 0.0;
        let mut sum = 0.0;
        for c in &field {
            for &p in c {
                max = max.max(p);
                sum += p;
            }
        }
        let oracle = max / (sum / 40.0);
        assert!((oracle - 1.9512195121951221).abs() < 1e-12);
        assert!((f_q(&field).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn all_zero_field_rejected() {
        let field = vec![vec![0.0; 20]; 3];
        assert_eq!(f_delta_h(&field), Err(PhysicsError::AllZeroPowerField));
        assert_eq!(f_q(&field), Err(PhysicsError::AllZeroPowerField));
    }

    #[test]
    fn peaking_invariant_under_uniform_scaling() {
        let mut field = vec![vec![1.0; 20]; 5];
        field[2][3] = 3.0;
        field[4][19] = 2.0;
        let f1 = (f_delta_h(&field).unwrap(), f_q(&field).unwrap());
        for c in field.iter_mut() {
            for p in c.iter_mut() {
                *p *= 7.25;
            }
        }
        let f2 = (f_delta_h(&field).unwrap(), f_q(&field).unwrap());
        assert!((f1.0 - f2.0).abs() < 1e-12);
        assert!((f1.1 - f2.1).abs() < 1e-12);
    }
}
