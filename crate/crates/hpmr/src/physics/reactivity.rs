//! Reactivity-derived operations: shutdown margin, isothermal temperature
//! coefficient, and lifetime extraction from a depletion trace.

use super::{KeffTrace, PhysicsError, ReactivityStates};

/// Reactivity in pcm: rho = (k - 1)/k * 1e5.
pub fn reactivity_pcm(k: f64) -> Result<f64, PhysicsError> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(PhysicsError::NonPositiveK);
    }
    Ok((k - 1.0) / k * 1.0e5)
}

/// Shutdown margin in pcm: SDM = dk1 + 0.9*(dk2 - dk3), where each dk term is
/// a reactivity difference between the two named states:
/// dk1 = rho(HFP) - rho(HZP), dk2 = rho(all drums in) - rho(HFP),
/// dk3 = rho(one drum in) - rho(HFP).
pub fn shutdown_margin(states: &ReactivityStates) -> Result<f64, PhysicsError> {
    let rho_hzp = reactivity_pcm(states.k_hzp_800)?;
    let rho_hfp = reactivity_pcm(states.k_hfp)?;
    let rho_all = reactivity_pcm(states.k_all_drums_in)?;
    let rho_one = reactivity_pcm(states.k_one_drum_in)?;
    let dk1 = rho_hfp - rho_hzp;
    let dk2 = rho_all - rho_hfp;
    let dk3 = rho_one - rho_hfp;
    Ok(dk1 + 0.9 * (dk2 - dk3))
}

/// Shutdown margin from the three reactivity differences directly (pcm).
pub fn shutdown_margin_from_deltas(dk1: f64, dk2: f64, dk3: f64) -> f64 {
    dk1 + 0.9 * (dk2 - dk3)
}

/// Isothermal temperature coefficient (pcm/K) between two isothermal states:
/// delta_rho = (k1 - k2)/(k1*k2) * 1e5, ITC = delta_rho / (T1 - T2).
pub fn itc(k_t1: f64, k_t2: f64, t1_k: f64, t2_k: f64) -> Result<f64, PhysicsError> {
    if !(k_t1 > 0.0) || !(k_t2 > 0.0) || !k_t1.is_finite() || !k_t2.is_finite() {
        return Err(PhysicsError::NonPositiveK);
    }
    if t1_k == t2_k {
        return Err(PhysicsError::EqualTemperatures);
    }
    let delta_rho = (k_t1 - k_t2) / (k_t1 * k_t2) * 1.0e5;
    Ok(delta_rho / (t1_k - t2_k))
}

/// Fuel lifetime in years from a depletion trace.
///
/// If the trace crosses k = 1, the crossing time is linearly interpolated
/// between the bracketing steps. If k < 1 at every step (a non-starter), the
/// line through the first two burnup steps — discounting the brief initial
/// quasi-equilibrium step — is extrapolated backward to the (negative) time
/// where k = 1. A trace above 1 throughout is extrapolated forward from its
/// last two steps.
pub fn lifetime_from_trace(trace: &KeffTrace) -> Result<f64, PhysicsError> {
    let pts = trace.points();
    if pts.len() < 3 {
        return Err(PhysicsError::TraceTooShort(pts.len()));
    }

    // crossing: first adjacent pair straddling k = 1
    for w in pts.windows(2) {
        let (t0, k0) = w[0];
        let (t1, k1) = w[1];
        if (k0 >= 1.0 && k1 < 1.0) || (k0 > 1.0 && k1 <= 1.0) {
            return Ok(t0 + (t1 - t0) * (k0 - 1.0) / (k0 - k1));
        }
    }

    let extrapolate = |(ta, ka): (f64, f64), (tb, kb): (f64, f64)| -> Result<f64, PhysicsError> {
        let slope = (kb - ka) / (tb - ta);
        if slope == 0.0 {
            return Err(PhysicsError::FlatTrace);
        }
        Ok(ta + (1.0 - ka) / slope)
    };

    if pts.iter().all(|&(_, k)| k < 1.0) {
        // backward through the first two burnup steps (skip the initial step)
        extrapolate(pts[1], pts[2])
    } else {
        extrapolate(pts[pts.len() - 2], pts[pts.len() - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trace(pts: &[(f64, f64)]) -> KeffTrace {
        KeffTrace::new(pts.to_vec()).unwrap()
    }

    #[test]
    fn sdm_reduces_to_dk1_when_dk2_equals_dk3() {
        assert_eq!(shutdown_margin_from_deltas(-1234.0, -5000.0, -5000.0), -1234.0);
    }

    #[test]
    fn sdm_hand_evaluation() {
        let sdm = shutdown_margin_from_deltas(-1000.0, -9000.0, -3000.0);
        assert!((sdm - (-6400.0)).abs() < 1e-12);
    }

    #[test]
    fn sdm_from_states_matches_delta_form() {
        let states = ReactivityStates {
            k_hzp_800: 1.09,
            k_hfp: 1.077,
            k_all_drums_in: 1.002,
            k_one_drum_in: 1.070,
            k_iso_550: 1.09,
            k_iso_850: 1.088,
            k_iso_1150: 1.08,
        };
        let rho = |k: f64| (k - 1.0) / k * 1e5;
        let dk1 = rho(1.077) - rho(1.09);
        let dk2 = rho(1.002) - rho(1.077);
        let dk3 = rho(1.070) - rho(1.077);
        let expect = dk1 + 0.9 * (dk2 - dk3);
        assert!((shutdown_margin(&states).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn sdm_rejects_non_positive_k() {
        let states = ReactivityStates {
            k_hzp_800: 1.09,
            k_hfp: 0.0,
            k_all_drums_in: 1.0,
            k_one_drum_in: 1.0,
            k_iso_550: 1.0,
            k_iso_850: 1.0,
            k_iso_1150: 1.0,
        };
        assert!(shutdown_margin(&states).is_err());
    }

    #[test]
    fn itc_zero_for_equal_k() {
        assert_eq!(itc(1.05, 1.05, 550.0, 850.0).unwrap(), 0.0);
    }

    #[test]
    fn itc_hand_evaluation() {
        // k(550)=1.02, k(850)=1.01: delta_rho = 970.7 pcm, ITC = -3.236
        let v = itc(1.02, 1.01, 550.0, 850.0).unwrap();
        let delta_rho: f64 = (1.02 - 1.01) / (1.02 * 1.01) * 1e5;
        assert!((delta_rho - 970.685).abs() < 1e-2);
        assert!((v - (-3.23562)).abs() < 1e-4);
    }

    #[test]
    fn itc_rejects_equal_temperatures() {
        assert_eq!(
            itc(1.02, 1.01, 850.0, 850.0),
            Err(PhysicsError::EqualTemperatures)
        );
    }

    #[test]
    fn lifetime_interpolates_crossing() {
        let t = trace(&[(0.001, 1.05), (1.0, 1.02), (5.0, 0.98)]);
        assert!((lifetime_from_trace(&t).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lifetime_backward_extrapolation_at_zero() {
        // slope from steps 2-3 is -0.01/y; backward from (1, 0.99) hits k=1 at t=0
        let t = trace(&[(0.001, 0.995), (1.0, 0.99), (2.0, 0.98)]);
        assert!((lifetime_from_trace(&t).unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn lifetime_backward_extrapolation_negative() {
        let t = trace(&[(0.001, 0.97), (1.0, 0.96), (2.0, 0.95)]);
        assert!((lifetime_from_trace(&t).unwrap() - (-3.0)).abs() < 1e-12);
    }

    #[test]
    fn lifetime_requires_three_points() {
        let t = trace(&[(0.001, 1.05), (1.0, 1.02)]);
        assert_eq!(lifetime_from_trace(&t), Err(PhysicsError::TraceTooShort(2)));
    }

    #[test]
    fn flat_subcritical_trace_errors() {
        let t = trace(&[(0.001, 0.97), (1.0, 0.96), (2.0, 0.96)]);
        assert_eq!(lifetime_from_trace(&t), Err(PhysicsError::FlatTrace));
    }

    #[test]
    fn trace_validation() {
        assert!(KeffTrace::new(vec![(0.0, 1.0), (0.0, 0.9)]).is_err());
        assert!(KeffTrace::new(vec![(0.0, 1.0), (1.0, -0.1)]).is_err());
    }

    proptest! {
        #[test]
        fn lifetime_exact_on_affine_traces(a in 1.01..1.3f64, b in 0.005..0.05f64) {
            // k(t) = a - b t crosses 1 at (a-1)/b
            let pts: Vec<(f64, f64)> = (0..40)
                .map(|i| {
                    let t = 0.001 + i as f64 * 0.5;
                    (t, a - b * t)
                })
                .filter(|&(_, k)| k > 0.0)
                .collect();
            prop_assume!(pts.len() >= 3);
            let lifetime = lifetime_from_trace(&trace(&pts)).unwrap();
            prop_assert!((lifetime - (a - 1.0) / b).abs() < 1e-9);
        }

        #[test]
        fn sdm_linear_in_each_delta(dk1 in -5000.0..0.0f64, dk2 in -20000.0..0.0f64,
                                    dk3 in -5000.0..0.0f64, lambda in 0.1..5.0f64) {
            let s = shutdown_margin_from_deltas(dk1, dk2, dk3);
            let s_scaled = shutdown_margin_from_deltas(lambda * dk1, lambda * dk2, lambda * dk3);
            prop_assert!((s_scaled - lambda * s).abs() < 1e-6 * s.abs().max(1.0));
        }

        #[test]
        fn itc_antisymmetry(k1 in 0.9..1.2f64, k2 in 0.9..1.2f64) {
            let a = itc(k1, k2, 550.0, 850.0).unwrap();
            let b = itc(k2, k1, 850.0, 550.0).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
