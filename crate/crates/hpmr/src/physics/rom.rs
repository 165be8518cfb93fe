//! Bundled reduced-order reactivity model behind the `PhysicsEvaluator`
//! interface.
//!
//! The model composes an enrichment/moderation term, axial and radial
//! non-leakage terms, and a drum-worth term into k_eff at the handful of
//! reactor states the QoIs need. Depletion is linear in time with a slope
//! proportional to power density over fissile mass. The power shape is a
//! reflector-flattened cosine axially (20 nodes per compact) with a radial
//! tilt driven by the moderation ratio. Coefficients are calibrated so the
//! nominal design reproduces its reference QoIs; everything is smooth and
//! deterministic.

use super::peaking::{avg_heat_flux, f_delta_h, f_q, peak_heat_flux};
use super::reactivity::{itc, lifetime_from_trace, shutdown_margin};
use super::{Evaluation, KeffTrace, PhysicsError, PhysicsEvaluator, QoIBundle, ReactivityStates};
use crate::constants::ReactorConstants;
use crate::design::{validate, DesignPoint, ValidatedDesign};
use crate::geometry::{drum_outer_radius_cm, flake_width_cm, hex_area};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tunable model coefficients. Defaults are the calibrated values; they can
/// be overridden from the run config.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RomCoefficients {
    /// Nominal-design fuel lifetime the k scale is calibrated against (years).
    pub nominal_lifetime_years: f64,
    /// Depletion slope base term (1/year) before the structural floor.
    pub slope_base_per_year: f64,
    /// Depletion slope floor (1/year) representing parasitic absorption.
    pub slope_floor_per_year: f64,
    /// Half-saturation constant of the enrichment reproduction term.
    pub eta_half: f64,
    /// Moderation ratio at peak multiplication.
    pub moderation_opt: f64,
    /// Width of the moderation response.
    pub moderation_sigma: f64,
    /// Saturation of the moderation exponent (in sigma units), bounding how
    /// far off-optimum moderation can depress k.
    pub moderation_exponent_cap: f64,
    /// Moderating weight of YHx relative to graphite per unit area.
    pub zeta_yhx: f64,
    /// Migration length (cm) in the leakage terms.
    pub migration_length_cm: f64,
    /// Axial reflector savings saturation (cm) and e-folding scale (cm).
    pub axial_savings_max_cm: f64,
    pub axial_savings_scale_cm: f64,
    /// Effective radial dimension: coef * flake_width + offset (cm).
    pub radial_coef: f64,
    pub radial_offset_cm: f64,
    /// Cosine fraction of the axial power shape (reflector flattening).
    pub axial_shape_mix: f64,
    /// Radial tilt amplitude and moderation exponent for F_dh.
    pub f_dh_amplitude: f64,
    pub f_dh_exponent: f64,
    /// All-drums-in worth (delta-k fraction) at the nominal design.
    pub drum_worth_nominal: f64,
    pub drum_angle_exponent: f64,
    pub b10_saturation_scale: f64,
    /// Hot-zero-power to hot-full-power defect at nominal power density (pcm).
    pub power_defect_pcm: f64,
    /// Isothermal k(T) expansion: pcm/K and pcm/K^2 around 800 K.
    pub itc_linear_pcm_per_k: f64,
    pub itc_quadratic_pcm_per_k2: f64,
    /// Sensitivity of the linear ITC term to the YHx-to-fuel area ratio.
    pub itc_moderator_sensitivity: f64,
    /// Fresh-core k bump ahead of the quasi-equilibrium step.
    pub fresh_core_bump: f64,
}

impl Default for RomCoefficients {
    fn default() -> Self {
        Self {
            nominal_lifetime_years: 6.99,
            slope_base_per_year: 0.0085,
            slope_floor_per_year: 0.0025,
            eta_half: 0.15,
            moderation_opt: 3.0,
            moderation_sigma: 3.5,
            moderation_exponent_cap: 2.1,
            zeta_yhx: 12.0,
            migration_length_cm: 25.0,
            axial_savings_max_cm: 18.0,
            axial_savings_scale_cm: 12.0,
            radial_coef: 2.2,
            radial_offset_cm: 60.0,
            axial_shape_mix: 0.69,
            f_dh_amplitude: 0.443,
            f_dh_exponent: 0.3,
            drum_worth_nominal: 0.06941,
            drum_angle_exponent: 0.7,
            b10_saturation_scale: 0.35,
            power_defect_pcm: 1200.0,
            itc_linear_pcm_per_k: -2.98053,
            itc_quadratic_pcm_per_k2: 9.0133e-4,
            itc_moderator_sensitivity: 1.0,
            fresh_core_bump: 1.004,
        }
    }
}

/// Design-side quantities the state ladder is built from.
#[derive(Debug, Clone, Copy)]
struct CoreTerms {
    moderation: f64,
    yhx_to_fuel: f64,
    /// Extrapolated axial height (cm) for the power shape.
    h_eff_cm: f64,
    drum_radius_cm: f64,
    compact_volume_m3: f64,
    slope_per_year: f64,
    /// eta * g * p_ax * p_rad, normalized against nominal by the caller.
    product: f64,
}

/// The reduced-order evaluator. Construction precomputes the nominal-design
/// reference terms so the calibration anchors hold by construction.
#[derive(Debug, Clone)]
pub struct RomEvaluator {
    coeffs: RomCoefficients,
    constants: ReactorConstants,
    nominal: CoreTerms,
    k_nominal: f64,
}

impl RomEvaluator {
    pub fn new(coeffs: RomCoefficients, constants: ReactorConstants) -> Self {
        let nominal_design =
            validate(DesignPoint::nominal()).expect("nominal design must be in bounds");
        let nominal = Self::core_terms(&coeffs, &constants, &nominal_design);
        let k_nominal = 1.0 + coeffs.nominal_lifetime_years * nominal.slope_per_year;
        Self {
            coeffs,
            constants,
            nominal,
            k_nominal,
        }
    }

    pub fn with_defaults() -> Self {
        Self::new(RomCoefficients::default(), ReactorConstants::default())
    }

    pub fn constants(&self) -> &ReactorConstants {
        &self.constants
    }

    fn core_terms(
        c: &RomCoefficients,
        constants: &ReactorConstants,
        d: &ValidatedDesign,
    ) -> CoreTerms {
        let w = flake_width_cm(d.pin_pitch_cm);
        let drum_r = drum_outer_radius_cm(w);

        let a_fuel = f64::from(constants.compacts_per_flake) * PI * d.compact_radius_cm.powi(2);
        let a_yhx =
            f64::from(constants.moderator_rods_per_flake) * PI * d.moderator_radius_cm.powi(2);
        let clad_outer = d.moderator_radius_cm + constants.moderator_clad_thickness_cm;
        let a_clad = f64::from(constants.moderator_rods_per_flake)
            * PI
            * (clad_outer.powi(2) - d.moderator_radius_cm.powi(2));
        let a_hp =
            f64::from(constants.heat_pipes_per_flake) * PI * constants.heat_pipe_radius_cm.powi(2);
        let a_graphite = hex_area(w) - a_fuel - a_yhx - a_clad - a_hp;

        let moderation = (a_graphite + c.zeta_yhx * a_yhx) / a_fuel;
        let eta = d.enrichment / (d.enrichment + c.eta_half);
        // quadratic response near the optimum, saturating far away so deep
        // off-optimum cores stay at a finite subcritical k
        let u = (moderation - c.moderation_opt) / c.moderation_sigma;
        let cap2 = c.moderation_exponent_cap * c.moderation_exponent_cap;
        let g_mod = (-0.5 * u * u * cap2 / (cap2 + u * u)).exp();

        let refl = (constants.total_core_height_cm - d.fuel_height_cm) / 2.0;
        let savings = c.axial_savings_max_cm * (1.0 - (-refl / c.axial_savings_scale_cm).exp());
        let h_eff = d.fuel_height_cm + 2.0 * savings;
        let b_axial = PI / h_eff;
        let p_axial = 1.0 / (1.0 + (c.migration_length_cm * b_axial).powi(2));

        let r_eff = c.radial_coef * w + c.radial_offset_cm;
        let b_radial = 2.405 / r_eff;
        let p_radial = 1.0 / (1.0 + (c.migration_length_cm * b_radial).powi(2));

        let nominal = DesignPoint::nominal();
        let slope = c.slope_base_per_year
            * (nominal.enrichment / d.enrichment)
            * (nominal.compact_radius_cm / d.compact_radius_cm).powi(4)
            * (nominal.fuel_height_cm / d.fuel_height_cm).powi(2)
            + c.slope_floor_per_year;

        let compact_volume_m3 = constants.total_compacts()
            * PI
            * d.compact_radius_cm.powi(2)
            * d.fuel_height_cm
            / 1.0e6;

        CoreTerms {
            moderation,
            yhx_to_fuel: a_yhx / a_fuel,
            h_eff_cm: h_eff,
            drum_radius_cm: drum_r,
            compact_volume_m3,
            slope_per_year: slope,
            product: eta * g_mod * p_axial * p_radial,
        }
    }

    /// Hot-full-power quasi-equilibrium k_eff.
    fn k_hfp(&self, terms: &CoreTerms) -> f64 {
        self.k_nominal * terms.product / self.nominal.product
    }

    fn drum_worth(&self, d: &ValidatedDesign, terms: &CoreTerms) -> f64 {
        let c = &self.coeffs;
        let nominal = DesignPoint::nominal();
        let sat = |x: f64| 1.0 - (-x / c.b10_saturation_scale).exp();
        c.drum_worth_nominal
            * (d.coating_angle_deg / nominal.coating_angle_deg).powf(c.drum_angle_exponent)
            * (sat(d.b10_fraction) / sat(nominal.b10_fraction))
            * (terms.drum_radius_cm / self.nominal.drum_radius_cm)
    }

    fn states(&self, d: &ValidatedDesign, terms: &CoreTerms) -> ReactivityStates {
        let c = &self.coeffs;
        let k_hfp = self.k_hfp(terms);

        let pd_ratio = self.nominal.compact_volume_m3 / terms.compact_volume_m3;
        let defect_pcm = c.power_defect_pcm * pd_ratio;
        let k_hzp = k_hfp * (defect_pcm / 1.0e5).exp();

        let worth = self.drum_worth(d, terms);
        let k_all = k_hfp * (1.0 - worth);
        let k_one = k_hfp * (1.0 - worth / f64::from(self.constants.drum_count));

        // Isothermal k(T) around the 800 K zero-power state; less YHx makes
        // the linear term more negative.
        let c1 = c.itc_linear_pcm_per_k
            * (1.0
                + c.itc_moderator_sensitivity * (self.nominal.yhx_to_fuel - terms.yhx_to_fuel)
                    / self.nominal.yhx_to_fuel);
        let k_iso = |t: f64| {
            let dt = t - 800.0;
            k_hzp * ((c1 * dt + c.itc_quadratic_pcm_per_k2 * dt * dt) / 1.0e5).exp()
        };

        ReactivityStates {
            k_hzp_800: k_hzp,
            k_hfp,
            k_all_drums_in: k_all,
            k_one_drum_in: k_one,
            k_iso_550: k_iso(550.0),
            k_iso_850: k_iso(850.0),
            k_iso_1150: k_iso(1150.0),
        }
    }

    /// Compact power field: 63 radial positions x 20 axial nodes.
    fn power_field(&self, terms: &CoreTerms, q_avg: f64, fuel_height_cm: f64) -> Vec<Vec<f64>> {
        let c = &self.coeffs;
        let n_radial = 63usize;
        let n_axial = 20usize;
        let tilt = c.f_dh_amplitude
            * (self.nominal.moderation / terms.moderation).powf(c.f_dh_exponent);
        let beta = c.axial_shape_mix;
        let mut field = Vec::with_capacity(n_radial);
        for i in 0..n_radial {
            let u = (i as f64 + 0.5) / n_radial as f64;
            let radial = 1.0 + tilt * (PI * u).cos();
            let mut compact = Vec::with_capacity(n_axial);
            for j in 0..n_axial {
                let z = ((j as f64 + 0.5) / n_axial as f64 - 0.5) * fuel_height_cm;
                let axial = (1.0 - beta) + beta * (PI * z / terms.h_eff_cm).cos();
                compact.push(q_avg * radial * axial);
            }
            field.push(compact);
        }
        field
    }

    fn depletion_trace(&self, k_hfp: f64, slope: f64) -> KeffTrace {
        if k_hfp < 1.0 {
            // two burnup steps suffice for the backward extrapolation; pick
            // the step so k stays positive whatever the slope
            let dt = (0.5f64).min(0.25 * k_hfp / slope);
            let t_qe = (0.001f64).min(dt / 10.0);
            let points = vec![
                (t_qe, k_hfp * self.coeffs.fresh_core_bump),
                (dt, k_hfp - slope * dt),
                (2.0 * dt, k_hfp - slope * 2.0 * dt),
            ];
            return KeffTrace::new(points).expect("generated trace is monotone and positive");
        }
        let mut points = vec![(0.001, k_hfp * self.coeffs.fresh_core_bump)];
        {
            let lifetime = (k_hfp - 1.0) / slope;
            let dt = (lifetime / 16.0).max(0.25);
            let mut t = dt;
            loop {
                let k = k_hfp - slope * t;
                points.push((t, k.max(1e-6)));
                if k < 1.0 || points.len() > 400 {
                    break;
                }
                t += dt;
            }
            while points.len() < 3 {
                t += dt;
                points.push((t, (k_hfp - slope * t).max(1e-6)));
            }
        }
        KeffTrace::new(points).expect("generated trace is monotone and positive")
    }
}

impl PhysicsEvaluator for RomEvaluator {
    fn evaluate_detailed(&self, design: &ValidatedDesign) -> Result<Evaluation, PhysicsError> {
        let terms = Self::core_terms(&self.coeffs, &self.constants, design);
        let states = self.states(design, &terms);

        let trace = self.depletion_trace(states.k_hfp, terms.slope_per_year);
        let lifetime = lifetime_from_trace(&trace)?;

        let q_avg = avg_heat_flux(design, &self.constants);
        let field = self.power_field(&terms, q_avg, design.fuel_height_cm);
        let fdh = f_delta_h(&field)?;
        let fq = f_q(&field)?;
        let q_max = peak_heat_flux(fq, q_avg)?;

        let qois = QoIBundle {
            lifetime_years: lifetime,
            sdm_pcm: shutdown_margin(&states)?,
            f_q: fq,
            f_delta_h: fdh,
            q_avg_mw_m2: q_avg,
            q_max_mw_m2: q_max,
            itc_low_pcm_k: itc(states.k_iso_550, states.k_iso_850, 550.0, 850.0)?,
            itc_high_pcm_k: itc(states.k_iso_850, states.k_iso_1150, 850.0, 1150.0)?,
        };
        Ok(Evaluation {
            qois,
            trace: Some(trace),
            states: Some(states),
        })
    }

    fn id(&self) -> &'static str {
        "rom-v1"
    }
}
