use std::f64::consts::{FRAC_PI_2, PI};

use fluxsense::decoherence::composite_rates;
use fluxsense::optimizer::{coherence_time, optimal_delay, sensitivity};
use fluxsense::qubit::thermal_visibility;
use fluxsense::{FluxBias, FringeEvaluator, SensorDesign};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn design(f_max_ghz: f64, ec_ghz: f64) -> SensorDesign {
    SensorDesign {
        f_q_max: f_max_ghz * 1e9,
        e_c_over_h: ec_ghz * 1e9,
        ..SensorDesign::default()
    }
}

fn omega(d: &SensorDesign, phi: f64) -> f64 {
    d.angular_frequency(FluxBias::new(phi).unwrap())
}

proptest! {
    #[test]
    fn first_flux_derivative(f in 2.0..20.0f64, ec in 0.15..0.35f64, phi in 0.02..0.45f64) {
        let d = design(f, ec);
        let h = 1e-6;
        let fd = (d.frequency_shift(FluxBias::new(phi).unwrap(), h).unwrap()
            - d.frequency_shift(FluxBias::new(phi).unwrap(), -h).unwrap()) / (2.0 * h);
        let exact = d.spectrum_derivatives(FluxBias::new(phi).unwrap()).d_omega_d_phi;
        prop_assert!(rel(fd, exact) < 1e-6, "fd {fd} exact {exact}");
    }

    #[test]
    fn second_flux_derivative(f in 2.0..20.0f64, ec in 0.15..0.35f64, phi in 0.0..0.45f64) {
        let d = design(f, ec);
        let b = FluxBias::new(phi).unwrap();
        let h = 1e-5;
        let up = d.spectrum_derivatives(FluxBias::new(phi + h).unwrap()).d_omega_d_phi;
        let down = if phi >= h {
            d.spectrum_derivatives(FluxBias::new(phi - h).unwrap()).d_omega_d_phi
        } else {
            // dω/dΦ is odd about the sweet spot.
            -d.spectrum_derivatives(FluxBias::new(h - phi).unwrap()).d_omega_d_phi
        };
        let fd = (up - down) / (2.0 * h);
        let exact = d.spectrum_derivatives(b).d2_omega_d_phi2;
        prop_assert!(rel(fd, exact) < 1e-6, "fd {fd} exact {exact}");
    }

    #[test]
    fn critical_current_derivative(f in 2.0..20.0f64, ec in 0.15..0.35f64, phi in 0.0..0.45f64) {
        // The √cos prefactor scales as √I_c, so a fractional change δ in I_c
        // multiplies f_max + E_C/h by √(1+δ).
        let d = design(f, ec);
        let scaled = |delta: f64| SensorDesign {
            f_q_max: d.plasma_sum() * (1.0 + delta).sqrt() - d.e_c_over_h,
            ..d.clone()
        };
        let h = 1e-5;
        let fd = (omega(&scaled(h), phi) - omega(&scaled(-h), phi)) / (2.0 * h);
        let exact = d.spectrum_derivatives(FluxBias::new(phi).unwrap()).ic_d_omega_d_ic;
        prop_assert!(rel(fd, exact) < 1e-6, "fd {fd} exact {exact}");
    }

    #[test]
    fn visibility_bounds(f in 0.0..30e9f64, t in 0.0..1.0f64, dt in 0.0..0.1f64, df in 0.0..1e9f64) {
        let v = thermal_visibility(f, t);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(thermal_visibility(f, t + dt) <= v);
        prop_assert!(thermal_visibility(f + df, t) >= v);
    }

    #[test]
    fn optimal_delay_is_stationary(a in 0.0..1e6f64, b in 1.0..1e6f64, n in 1u32..6) {
        let tau = optimal_delay(a, b, n).unwrap();
        let nf = f64::from(n);
        let residual = 2.0 * nf * b * b * tau * tau + nf * a * tau - 1.0;
        prop_assert!(residual.abs() < 1e-10);
    }

    #[test]
    fn optimal_delay_within_coherence(a in 1e-3..1e6f64, b in 1e-3..1e6f64) {
        prop_assert!(optimal_delay(a, b, 1).unwrap() < coherence_time(a, b).unwrap());
        let t2 = coherence_time(a, b).unwrap();
        prop_assert!((a * t2 + b * b * t2 * t2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fringe_probability_bounded(phi_ext in -1e-3..1e-3f64, tau in 0.0..1e-4f64, n in 1u32..4, theta in -PI..PI) {
        let ev = FringeEvaluator::new(SensorDesign::default(), FluxBias::new(0.3).unwrap(), n).unwrap();
        let p = ev.probability_with_phase(phi_ext, tau, theta).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn envelope_non_increasing(tau in 0.0..2e-5f64, dtau in 0.0..2e-5f64, n in 1u32..4) {
        let ev = FringeEvaluator::new(SensorDesign::default(), FluxBias::new(0.4).unwrap(), n).unwrap();
        prop_assert!(ev.envelope(tau + dtau) <= ev.envelope(tau));
    }

    #[test]
    fn sensitivity_is_zero_crossing_slope(phi in 0.05..0.47f64, tau_frac in 0.05..1.5f64) {
        // Finite difference of the frozen-envelope fringe at a zero crossing.
        let d = SensorDesign::default();
        let b = FluxBias::new(phi).unwrap();
        let r = composite_rates(&d, b);
        let tau = tau_frac * optimal_delay(r.a, r.b, 1).unwrap();
        let ev = FringeEvaluator::new(d.clone(), b, 1).unwrap();
        let h = 1e-9;
        let fd = (ev.probability_with_phase(h, tau, FRAC_PI_2).unwrap()
            - ev.probability_with_phase(-h, tau, FRAC_PI_2).unwrap()) / (2.0 * h);
        let s = sensitivity(&d, b, tau).unwrap();
        prop_assert!(rel(fd.abs(), s) < 1e-6, "fd {fd} s {s}");
    }
}

#[test]
fn n_qubit_grids_are_subsets_of_single_qubit_patterns() {
    use fluxsense::pea::{build_flux_grid, PeaConfig};
    let d = SensorDesign::default();
    let b = FluxBias::new(0.442).unwrap();
    let g1 = build_flux_grid(&PeaConfig::desk(1), &d, b).unwrap();
    let g2 = build_flux_grid(&PeaConfig::desk(2), &d, b).unwrap();
    let ev = FringeEvaluator::new(d, b, 2).unwrap();
    let on_g2 = ev.pattern_grid(&g2, 1e-7).unwrap();
    let on_g1 = ev.pattern_grid(&g1[..g2.len()], 1e-7).unwrap();
    assert_eq!(on_g1, on_g2);
}

#[test]
fn three_qubit_pattern_covers_more_probability() {
    let d = SensorDesign::default();
    let b = FluxBias::new(0.442).unwrap();
    let range = |n: u32| {
        let ev = FringeEvaluator::new(d.clone(), b, n).unwrap();
        let fluxes: Vec<f64> = (0..512).map(|i| i as f64 * 4e-8).collect();
        let p = ev.pattern_grid(&fluxes, 1e-7).unwrap();
        p.iter().cloned().fold(f64::MIN, f64::max) - p.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(range(3) > range(1));
}
