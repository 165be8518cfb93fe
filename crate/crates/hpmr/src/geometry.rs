//! Derived core geometry: flake width, drum radius, reflector thickness, and
//! per-component volumes feeding the mass inventory.

use crate::constants::ReactorConstants;
use crate::design::ValidatedDesign;
use serde::{Deserialize, Serialize};

const CM3_PER_M3: f64 = 1.0e6;
/// Extra flake width beyond the 13-pitch lattice span (cm), held constant.
const FLAKE_MARGIN_CM: f64 = 0.858;
/// Clearance between drum outer surface and flake cell edge (cm), held constant.
const DRUM_CLEARANCE_CM: f64 = 0.252;

/// Area of a regular hexagon with flat-to-flat width `w`.
pub fn hex_area(w: f64) -> f64 {
    (3.0f64.sqrt() / 2.0) * w * w
}

/// Flake flat-to-flat width for a given pin pitch: (13*sqrt(3)/2)*pp + 0.858.
pub fn flake_width_cm(pin_pitch_cm: f64) -> f64 {
    13.0 * 3.0f64.sqrt() / 2.0 * pin_pitch_cm + FLAKE_MARGIN_CM
}

/// Control-drum outer radius: half the flake width minus the fixed clearance.
pub fn drum_outer_radius_cm(flake_width_cm: f64) -> f64 {
    0.5 * (flake_width_cm - DRUM_CLEARANCE_CM)
}

/// Derived dimensions and component volumes for one candidate design.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub flake_width_cm: f64,
    pub drum_outer_radius_cm: f64,
    /// Drum height equals the active fuel height.
    pub drum_height_cm: f64,
    /// Axial reflector thickness per end (cm); top and bottom are equal.
    pub axial_reflector_thickness_cm: f64,
    /// Total TRISO compact volume (m^3).
    pub compact_fuel_m3: f64,
    /// YHx moderator volume across all rods (m^3).
    pub moderator_m3: f64,
    /// Moderator cladding shell volume (m^3).
    pub moderator_clad_m3: f64,
    /// Graphite monolith volume: flake hexes minus all channels (m^3).
    pub graphite_monolith_m3: f64,
    /// Radial reflector annulus over the active height (m^3).
    pub radial_reflector_m3: f64,
    /// Axial reflector slabs, both ends, full envelope cross-section (m^3).
    pub axial_reflector_m3: f64,
    /// Drum bodies: full cylinders minus the absorber coating shells (m^3).
    pub drum_body_m3: f64,
    /// Drum absorber coating shells subtended by the coating angle (m^3).
    pub drum_coating_m3: f64,
    /// Heat-pipe envelope steel shells (m^3).
    pub hp_steel_m3: f64,
}

/// Computes the full geometry for a validated design.
///
/// The core envelope (radial flat-to-flat, total height) is identical for
/// every candidate; axial reflectors absorb the difference between the total
/// height and the fuel height, (total - fuel)/2 per end.
pub fn derive_geometry(design: &ValidatedDesign, constants: &ReactorConstants) -> GeometrySpec {
    let fh = design.fuel_height_cm;
    let w = flake_width_cm(design.pin_pitch_cm);
    let drum_r = drum_outer_radius_cm(w);
    let ax_refl = (constants.total_core_height_cm - fh) / 2.0;

    let n_flakes = f64::from(constants.flakes);
    let n_compacts = constants.total_compacts();
    let n_rods = n_flakes * f64::from(constants.moderator_rods_per_flake);
    let n_hp = f64::from(constants.total_heat_pipes());
    let n_drums = f64::from(constants.drum_count);

    let compact_area = std::f64::consts::PI * design.compact_radius_cm.powi(2);
    let moderator_area = std::f64::consts::PI * design.moderator_radius_cm.powi(2);
    let clad_outer = design.moderator_radius_cm + constants.moderator_clad_thickness_cm;
    let clad_area = std::f64::consts::PI * (clad_outer.powi(2) - design.moderator_radius_cm.powi(2));
    let hp_area = std::f64::consts::PI * constants.heat_pipe_radius_cm.powi(2);

    let cell_area = hex_area(w);
    let monolith_area = cell_area
        - f64::from(constants.compacts_per_flake) * compact_area
        - f64::from(constants.heat_pipes_per_flake) * hp_area
        - f64::from(constants.moderator_rods_per_flake) * (moderator_area + clad_area);

    let envelope_area = hex_area(constants.radial_reflector_flat_to_flat_cm);
    let drum_area = std::f64::consts::PI * drum_r.powi(2);
    let radial_reflector_area = envelope_area - n_flakes * cell_area - n_drums * drum_area;

    // Coating shell: annulus of the coating thickness over the coated arc.
    let t = constants.drum_coating_thickness_cm;
    let coating_area = design.coating_angle_deg / 360.0
        * std::f64::consts::PI
        * (drum_r.powi(2) - (drum_r - t).powi(2));

    // Heat pipes span the active height plus a condenser allowance.
    let hp_length = fh + 30.0;
    let hp_shell_area = std::f64::consts::PI
        * (constants.heat_pipe_radius_cm.powi(2)
            - (constants.heat_pipe_radius_cm - constants.heat_pipe_wall_cm).powi(2));

    GeometrySpec {
        flake_width_cm: w,
        drum_outer_radius_cm: drum_r,
        drum_height_cm: fh,
        axial_reflector_thickness_cm: ax_refl,
        compact_fuel_m3: n_compacts * compact_area * fh / CM3_PER_M3,
        moderator_m3: n_rods * moderator_area * fh / CM3_PER_M3,
        moderator_clad_m3: n_rods * clad_area * fh / CM3_PER_M3,
        graphite_monolith_m3: n_flakes * monolith_area * fh / CM3_PER_M3,
        radial_reflector_m3: radial_reflector_area * fh / CM3_PER_M3,
        axial_reflector_m3: envelope_area * 2.0 * ax_refl / CM3_PER_M3,
        drum_body_m3: n_drums * (drum_area * fh - coating_area * fh) / CM3_PER_M3,
        drum_coating_m3: n_drums * coating_area * fh / CM3_PER_M3,
        hp_steel_m3: n_hp * hp_shell_area * hp_length / CM3_PER_M3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{validate, DesignPoint};
    use proptest::prelude::*;

    fn nominal_geometry() -> GeometrySpec {
        derive_geometry(
            &validate(DesignPoint::nominal()).unwrap(),
            &ReactorConstants::default(),
        )
    }

    #[test]
    fn nominal_flake_width_matches_table_value() {
        let g = nominal_geometry();
        assert!((g.flake_width_cm - 26.752).abs() < 1e-3);
    }

    #[test]
    fn nominal_drum_diameter_matches_table_value() {
        let g = nominal_geometry();
        assert!((2.0 * g.drum_outer_radius_cm - 26.5).abs() < 1e-2);
    }

    #[test]
    fn low_pitch_geometry_matches_hand_evaluation() {
        // Direct evaluation of the two width formulas at pp = 1.94.
        let w = flake_width_cm(1.94);
        assert!((w - 22.699).abs() < 1e-3);
        assert!((drum_outer_radius_cm(w) - 11.224).abs() < 1e-3);
    }

    #[test]
    fn axial_reflector_absorbs_height_difference() {
        let g = nominal_geometry();
        assert!((g.axial_reflector_thickness_cm - 20.0).abs() < 1e-12);
        let d = validate(DesignPoint {
            fuel_height_cm: 190.0,
            ..DesignPoint::nominal()
        })
        .unwrap();
        let g = derive_geometry(&d, &ReactorConstants::default());
        assert!((g.axial_reflector_thickness_cm - 5.0).abs() < 1e-12);
        assert!((g.drum_height_cm - 190.0).abs() < 1e-12);
    }

    #[test]
    fn nominal_compact_volume() {
        // 30 * 63 * pi * 1^2 * 160 cm^3
        let g = nominal_geometry();
        let expect = 30.0 * 63.0 * std::f64::consts::PI * 160.0 / 1e6;
        assert!((g.compact_fuel_m3 - expect).abs() < 1e-12);
    }

    fn arb_design() -> impl Strategy<Value = DesignPoint> {
        (
            35.0..180.0f64,
            0.20..0.95f64,
            130.0..190.0f64,
            1.94..2.78f64,
            0.17..0.199f64,
            0.0..1.0f64,
            0.0..1.0f64,
        )
            .prop_map(|(ca, b10, fh, pp, e, ucr, umr)| {
                let (cr_lo, cr_hi) = crate::design::compact_radius_bounds(pp);
                let (mr_lo, mr_hi) = crate::design::moderator_radius_bounds(pp);
                DesignPoint {
                    coating_angle_deg: ca,
                    b10_fraction: b10,
                    fuel_height_cm: fh,
                    pin_pitch_cm: pp,
                    enrichment: e,
                    compact_radius_cm: cr_lo + ucr * (cr_hi - cr_lo),
                    moderator_radius_cm: mr_lo + umr * (mr_hi - mr_lo),
                }
            })
    }

    proptest! {
        #[test]
        fn all_volumes_positive_in_bounds(d in arb_design()) {
            let g = derive_geometry(&validate(d).unwrap(), &ReactorConstants::default());
            for v in [
                g.compact_fuel_m3,
                g.moderator_m3,
                g.moderator_clad_m3,
                g.graphite_monolith_m3,
                g.radial_reflector_m3,
                g.axial_reflector_m3,
                g.drum_body_m3,
                g.drum_coating_m3,
                g.hp_steel_m3,
            ] {
                prop_assert!(v > 0.0, "non-positive volume {v} for {d:?}");
            }
        }

        #[test]
        fn flake_and_drum_strictly_increase_with_pitch(pp1 in 1.94..2.77f64, dp in 0.001..0.01f64) {
            let pp2 = pp1 + dp;
            prop_assert!(flake_width_cm(pp2) > flake_width_cm(pp1));
            prop_assert!(
                drum_outer_radius_cm(flake_width_cm(pp2)) > drum_outer_radius_cm(flake_width_cm(pp1))
            );
        }
    }

    #[test]
    fn core_envelope_identical_across_designs() {
        let c = ReactorConstants::default();
        let d1 = validate(DesignPoint::nominal()).unwrap();
        let d2 = validate(DesignPoint {
            fuel_height_cm: 130.0,
            pin_pitch_cm: 2.78,
            compact_radius_cm: 1.0,
            moderator_radius_cm: 0.9,
            ..DesignPoint::nominal()
        })
        .unwrap();
        let g1 = derive_geometry(&d1, &c);
        let g2 = derive_geometry(&d2, &c);
        // active region + axial reflectors always fill the same envelope
        let h1 = g1.drum_height_cm + 2.0 * g1.axial_reflector_thickness_cm;
        let h2 = g2.drum_height_cm + 2.0 * g2.axial_reflector_thickness_cm;
        assert!((h1 - h2).abs() < 1e-12);
        assert!((h1 - c.total_core_height_cm).abs() < 1e-12);
    }
}
