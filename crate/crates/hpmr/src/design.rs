//! Design vector, parameter bounds, and the normalized action-space mapping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Moderator cladding thickness (cm), fixed across the design space. The
/// moderator-radius bounds are defined relative to the pitch minus twice this.
pub const MODERATOR_CLAD_CM: f64 = 0.095;

/// Fixed column order used whenever a design is written to or read from CSV.
pub const DESIGN_CSV_HEADER: &str = "x_ca,x_B10,x_fh,x_pp,x_e,x_cr,x_mr";

/// The seven free parameters of a candidate core design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    /// Control drum absorber coating angle (degrees).
    pub coating_angle_deg: f64,
    /// Drum absorber B-10 enrichment (atom fraction).
    pub b10_fraction: f64,
    /// Active fuel height (cm).
    pub fuel_height_cm: f64,
    /// Pin pitch, flat-to-flat (cm).
    pub pin_pitch_cm: f64,
    /// U-235 enrichment (mass fraction).
    pub enrichment: f64,
    /// Fuel compact radius (cm).
    pub compact_radius_cm: f64,
    /// Moderator rod radius (cm).
    pub moderator_radius_cm: f64,
}

/// Violation of a design-space bound.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{name} = {value} outside bounds [{lo}, {hi}]")]
pub struct OutOfBounds {
    pub name: &'static str,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// A design that has passed every bound check, including the pitch-dependent
/// radius bounds. Constructed only through [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedDesign(DesignPoint);

impl std::ops::Deref for ValidatedDesign {
    type Target = DesignPoint;
    fn deref(&self) -> &DesignPoint {
        &self.0
    }
}

impl ValidatedDesign {
    pub fn point(&self) -> DesignPoint {
        self.0
    }
}

/// Fixed bounds for the four pitch-independent parameters plus the pitch itself.
pub const COATING_ANGLE_BOUNDS: (f64, f64) = (35.0, 180.0);
pub const B10_BOUNDS: (f64, f64) = (0.20, 0.95);
pub const FUEL_HEIGHT_BOUNDS: (f64, f64) = (130.0, 190.0);
pub const PIN_PITCH_BOUNDS: (f64, f64) = (1.94, 2.78);
pub const ENRICHMENT_BOUNDS: (f64, f64) = (0.17, 0.199);

/// Compact-radius bounds for a given pitch: [pp/4, pp/2].
pub fn compact_radius_bounds(pin_pitch_cm: f64) -> (f64, f64) {
    (pin_pitch_cm / 4.0, pin_pitch_cm / 2.0)
}

/// Moderator-radius bounds for a given pitch:
/// [(pp - 2*clad)/5, (pp - 2*clad)/2].
pub fn moderator_radius_bounds(pin_pitch_cm: f64) -> (f64, f64) {
    let free = pin_pitch_cm - 2.0 * MODERATOR_CLAD_CM;
    (free / 5.0, free / 2.0)
}

impl DesignPoint {
    /// Nominal core design (Table-4 nominal column).
    pub fn nominal() -> Self {
        Self {
            coating_angle_deg: 90.0,
            b10_fraction: 0.95,
            fuel_height_cm: 160.0,
            pin_pitch_cm: 2.3,
            enrichment: 0.197,
            compact_radius_cm: 1.0,
            moderator_radius_cm: 0.825,
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [
            self.coating_angle_deg,
            self.b10_fraction,
            self.fuel_height_cm,
            self.pin_pitch_cm,
            self.enrichment,
            self.compact_radius_cm,
            self.moderator_radius_cm,
        ]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            coating_angle_deg: a[0],
            b10_fraction: a[1],
            fuel_height_cm: a[2],
            pin_pitch_cm: a[3],
            enrichment: a[4],
            compact_radius_cm: a[5],
            moderator_radius_cm: a[6],
        }
    }

    /// One CSV row in the fixed `x_ca,x_B10,x_fh,x_pp,x_e,x_cr,x_mr` order.
    pub fn to_csv_row(&self) -> String {
        let a = self.as_array();
        a.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a CSV row in the fixed column order.
    pub fn from_csv_row(row: &str) -> Result<Self, DesignParseError> {
        let fields: Vec<&str> = row.trim().split(',').collect();
        if fields.len() != 7 {
            return Err(DesignParseError::FieldCount(fields.len()));
        }
        let mut a = [0.0; 7];
        for (i, f) in fields.iter().enumerate() {
            a[i] = f
                .trim()
                .parse::<f64>()
                .map_err(|_| DesignParseError::BadField(i, f.trim().to_string()))?;
        }
        Ok(Self::from_array(a))
    }
}

#[derive(Debug, Error)]
pub enum DesignParseError {
    #[error("design row must have 7 fields, got {0}")]
    FieldCount(usize),
    #[error("field {0} is not a number: {1:?}")]
    BadField(usize, String),
}

fn check(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<(), OutOfBounds> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(OutOfBounds {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Checks every bound, including the pitch-dependent compact- and
/// moderator-radius bounds, and returns the design wrapped as validated.
pub fn validate(design: DesignPoint) -> Result<ValidatedDesign, OutOfBounds> {
    check(
        "coating_angle_deg",
        design.coating_angle_deg,
        COATING_ANGLE_BOUNDS.0,
        COATING_ANGLE_BOUNDS.1,
    )?;
    check(
        "b10_fraction",
        design.b10_fraction,
        B10_BOUNDS.0,
        B10_BOUNDS.1,
    )?;
    check(
        "fuel_height_cm",
        design.fuel_height_cm,
        FUEL_HEIGHT_BOUNDS.0,
        FUEL_HEIGHT_BOUNDS.1,
    )?;
    check(
        "pin_pitch_cm",
        design.pin_pitch_cm,
        PIN_PITCH_BOUNDS.0,
        PIN_PITCH_BOUNDS.1,
    )?;
    check(
        "enrichment",
        design.enrichment,
        ENRICHMENT_BOUNDS.0,
        ENRICHMENT_BOUNDS.1,
    )?;
    let (cr_lo, cr_hi) = compact_radius_bounds(design.pin_pitch_cm);
    check("compact_radius_cm", design.compact_radius_cm, cr_lo, cr_hi)?;
    let (mr_lo, mr_hi) = moderator_radius_bounds(design.pin_pitch_cm);
    check(
        "moderator_radius_cm",
        design.moderator_radius_cm,
        mr_lo,
        mr_hi,
    )?;
    Ok(ValidatedDesign(design))
}

fn to_unit(v: f64, lo: f64, hi: f64) -> f64 {
    (v - lo) / (hi - lo)
}

fn from_unit(u: f64, lo: f64, hi: f64) -> f64 {
    lo + u * (hi - lo)
}

/// Maps an in-bounds design onto the unit cube. The radius coordinates use
/// the bounds induced by the design's own pitch.
pub fn normalize(design: &DesignPoint) -> [f64; 7] {
    let (cr_lo, cr_hi) = compact_radius_bounds(design.pin_pitch_cm);
    let (mr_lo, mr_hi) = moderator_radius_bounds(design.pin_pitch_cm);
    [
        to_unit(
            design.coating_angle_deg,
            COATING_ANGLE_BOUNDS.0,
            COATING_ANGLE_BOUNDS.1,
        ),
        to_unit(design.b10_fraction, B10_BOUNDS.0, B10_BOUNDS.1),
        to_unit(
            design.fuel_height_cm,
            FUEL_HEIGHT_BOUNDS.0,
            FUEL_HEIGHT_BOUNDS.1,
        ),
        to_unit(design.pin_pitch_cm, PIN_PITCH_BOUNDS.0, PIN_PITCH_BOUNDS.1),
        to_unit(design.enrichment, ENRICHMENT_BOUNDS.0, ENRICHMENT_BOUNDS.1),
        to_unit(design.compact_radius_cm, cr_lo, cr_hi),
        to_unit(design.moderator_radius_cm, mr_lo, mr_hi),
    ]
}

/// Maps a unit-cube vector back to a design. The pitch coordinate is decoded
/// first; the radius coordinates are then decoded against the bounds that
/// pitch induces, with clamping into them, so any vector in [0,1]^7 yields a
/// valid design.
pub fn denormalize(unit: &[f64; 7]) -> DesignPoint {
    let pp = from_unit(
        unit[3].clamp(0.0, 1.0),
        PIN_PITCH_BOUNDS.0,
        PIN_PITCH_BOUNDS.1,
    );
    let (cr_lo, cr_hi) = compact_radius_bounds(pp);
    let (mr_lo, mr_hi) = moderator_radius_bounds(pp);
    DesignPoint {
        coating_angle_deg: from_unit(
            unit[0].clamp(0.0, 1.0),
            COATING_ANGLE_BOUNDS.0,
            COATING_ANGLE_BOUNDS.1,
        ),
        b10_fraction: from_unit(unit[1].clamp(0.0, 1.0), B10_BOUNDS.0, B10_BOUNDS.1),
        fuel_height_cm: from_unit(
            unit[2].clamp(0.0, 1.0),
            FUEL_HEIGHT_BOUNDS.0,
            FUEL_HEIGHT_BOUNDS.1,
        ),
        pin_pitch_cm: pp,
        enrichment: from_unit(
            unit[4].clamp(0.0, 1.0),
            ENRICHMENT_BOUNDS.0,
            ENRICHMENT_BOUNDS.1,
        ),
        compact_radius_cm: from_unit(unit[5].clamp(0.0, 1.0), cr_lo, cr_hi).clamp(cr_lo, cr_hi),
        moderator_radius_cm: from_unit(unit[6].clamp(0.0, 1.0), mr_lo, mr_hi).clamp(mr_lo, mr_hi),
    }
}
