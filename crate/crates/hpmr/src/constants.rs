//! Fixed reactor characteristics shared by the geometry, physics, and cost
//! models. Everything here is held constant across the design space.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Material densities in g/cm^3.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct MaterialDensities {
    pub triso_compact: f64,
    pub yhx: f64,
    pub graphite: f64,
    pub beryllium: f64,
    pub b4c: f64,
    pub steel: f64,
}

impl Default for MaterialDensities {
    fn default() -> Self {
        // TRISO / YHx / graphite defaults sit mid-range of the material table;
        // Be, B4C, and 316 steel are handbook values.
        Self {
            triso_compact: 3.35,
            yhx: 4.45,
            graphite: 2.1,
            beryllium: 1.85,
            b4c: 2.52,
            steel: 7.99,
        }
    }
}

/// Fixed plant and lattice constants (Table-1 defaults).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ReactorConstants {
    /// Core thermal power (MWth).
    pub thermal_power_mw: f64,
    /// Net electric conversion efficiency applied to thermal power.
    pub electric_efficiency: f64,
    pub flakes: u32,
    pub compacts_per_flake: u32,
    pub heat_pipes_per_flake: u32,
    pub moderator_rods_per_flake: u32,
    pub drum_count: u32,
    /// Drum absorber coating thickness (cm); unchanged regardless of drum size.
    pub drum_coating_thickness_cm: f64,
    pub moderator_clad_thickness_cm: f64,
    /// Heat-pipe envelope outer radius (cm).
    pub heat_pipe_radius_cm: f64,
    /// Heat-pipe envelope wall thickness (cm).
    pub heat_pipe_wall_cm: f64,
    /// Radial reflector outer flat-to-flat width (cm); the core envelope.
    pub radial_reflector_flat_to_flat_cm: f64,
    /// Total core height including axial reflectors (cm).
    pub total_core_height_cm: f64,
    /// TRISO packing fraction inside a compact.
    pub packing_fraction: f64,
    /// Uranium heavy-metal loading per unit compact volume (g/cm^3).
    /// Calibrated so the nominal design carries 525.06 kg of heavy metal.
    pub uranium_loading_g_per_cm3: f64,
    pub density: MaterialDensities,
}

impl Default for ReactorConstants {
    fn default() -> Self {
        Self {
            thermal_power_mw: 2.0,
            electric_efficiency: 0.30,
            flakes: 30,
            compacts_per_flake: 63,
            heat_pipes_per_flake: 37,
            moderator_rods_per_flake: 27,
            drum_count: 12,
            drum_coating_thickness_cm: 1.0,
            moderator_clad_thickness_cm: crate::design::MODERATOR_CLAD_CM,
            heat_pipe_radius_cm: 1.05,
            heat_pipe_wall_cm: 0.08,
            radial_reflector_flat_to_flat_cm: 260.0,
            total_core_height_cm: 200.0,
            packing_fraction: 0.40,
            uranium_loading_g_per_cm3: 0.5526845,
            density: MaterialDensities::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConstantsError {
    #[error("density {name} = {value} outside plausible range [{lo}, {hi}]")]
    DensityRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}

impl ReactorConstants {
    /// Sanity-checks the density table against the documented ranges and the
    /// structural fields for positivity. Used when loading from config.
    pub fn validate(&self) -> Result<(), ConstantsError> {
        let d = &self.density;
        let ranges = [
            ("triso_compact", d.triso_compact, 3.2, 3.5),
            ("yhx", d.yhx, 4.3, 4.6),
            ("graphite", d.graphite, 1.9, 2.3),
            ("beryllium", d.beryllium, 1.7, 2.0),
            ("b4c", d.b4c, 2.3, 2.6),
            ("steel", d.steel, 7.5, 8.3),
        ];
        for (name, value, lo, hi) in ranges {
            if !(value >= lo && value <= hi) {
                return Err(ConstantsError::DensityRange {
                    name,
                    value,
                    lo,
                    hi,
                });
            }
        }
        for (name, v) in [
            ("thermal_power_mw", self.thermal_power_mw),
            ("electric_efficiency", self.electric_efficiency),
            ("total_core_height_cm", self.total_core_height_cm),
            ("packing_fraction", self.packing_fraction),
            ("uranium_loading_g_per_cm3", self.uranium_loading_g_per_cm3),
        ] {
            if v <= 0.0 {
                return Err(ConstantsError::NonPositive(name));
            }
        }
        Ok(())
    }

    pub fn total_compacts(&self) -> f64 {
        f64::from(self.flakes) * f64::from(self.compacts_per_flake)
    }

    pub fn total_heat_pipes(&self) -> u32 {
        self.flakes * self.heat_pipes_per_flake
    }

    /// Net electric output (MWe).
    pub fn electric_power_mw(&self) -> f64 {
        self.thermal_power_mw * self.electric_efficiency
    }
}
