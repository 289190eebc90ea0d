//! Ramsey and GHZ probability patterns.
//!
//! For `N` spectrally identical qubits prepared in a GHZ state, evolved for a
//! delay τ and projected onto the first qubit, the excited-state probability
//! is
//!
//! ```text
//! P = ½ + ½ · V_th · e^{−N(Aτ + B²τ²)} · cos(N·Δω·τ + θ)
//! ```
//!
//! where `Δω = ω_q(Φ* + Φ_ext) − ω_d`, the envelope rates `A`, `B` and the
//! thermal visibility `V_th` are frozen at the operating point Φ*, and θ is
//! an optional readout-phase offset. `N = 1` is the plain Ramsey fringe.

use serde::{Deserialize, Serialize};

use crate::decoherence::composite_rates;
use crate::error::{Error, Result};
use crate::qubit::{thermal_visibility, FluxBias, SensorDesign};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeEvaluator {
    design: SensorDesign,
    bias: FluxBias,
    n_qubits: u32,
    drive_omega: f64,
    decoherence_enabled: bool,
    omega_bias: f64,
    a: f64,
    b: f64,
    visibility: f64,
}

impl FringeEvaluator {
    /// Evaluator driven on resonance with the qubits at `bias`, so that zero
    /// external flux is the zero-phase reference.
    pub fn new(design: SensorDesign, bias: FluxBias, n_qubits: u32) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("n_qubits", "need at least one qubit"));
        }
        let rates = composite_rates(&design, bias);
        let omega_bias = design.angular_frequency(bias);
        let visibility = thermal_visibility(design.transition_frequency(bias), design.temperature);
        Ok(FringeEvaluator {
            design,
            bias,
            n_qubits,
            drive_omega: omega_bias,
            decoherence_enabled: true,
            omega_bias,
            a: rates.a,
            b: rates.b,
            visibility,
        })
    }

    /// Switches the decay envelope on or off. Thermal visibility is kept.
    pub fn with_decoherence(mut self, enabled: bool) -> Self {
        self.decoherence_enabled = enabled;
        self
    }

    pub fn with_drive_frequency(mut self, omega_d: f64) -> Result<Self> {
        if !(omega_d > 0.0 && omega_d.is_finite()) {
            return Err(Error::invalid(
                "drive_omega",
                format!("must be positive, got {omega_d}"),
            ));
        }
        self.drive_omega = omega_d;
        Ok(self)
    }

    pub fn design(&self) -> &SensorDesign {
        &self.design
    }

    pub fn bias(&self) -> FluxBias {
        self.bias
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn drive_omega(&self) -> f64 {
        self.drive_omega
    }

    pub fn decoherence_enabled(&self) -> bool {
        self.decoherence_enabled
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    /// Effective `(A, B)` used by the envelope; zero when decoherence is off.
    pub fn envelope_rates(&self) -> (f64, f64) {
        if self.decoherence_enabled {
            (self.a, self.b)
        } else {
            (0.0, 0.0)
        }
    }

    /// Detuning Δω(Φ_ext) between the qubit and the drive, rad/s.
    pub fn detuning(&self, phi_ext: f64) -> Result<f64> {
        let shift = self.design.frequency_shift(self.bias, phi_ext)?;
        Ok(shift + (self.omega_bias - self.drive_omega))
    }

    /// Fringe amplitude `V_th · e^{−N(Aτ+B²τ²)}` at delay τ.
    pub fn envelope(&self, tau: f64) -> f64 {
        let (a, b) = self.envelope_rates();
        let n = f64::from(self.n_qubits);
        self.visibility * (-n * (a * tau + b * b * tau * tau)).exp()
    }

    pub fn probability_excited(&self, phi_ext: f64, tau: f64) -> Result<f64> {
        self.probability_with_phase(phi_ext, tau, 0.0)
    }

    /// Probability with an extra readout phase θ inside the cosine.
    pub fn probability_with_phase(&self, phi_ext: f64, tau: f64, theta: f64) -> Result<f64> {
        if tau.is_nan() || tau < 0.0 {
            return Err(Error::invalid(
                "tau",
                format!("delay must be non-negative, got {tau}"),
            ));
        }
        let phase = f64::from(self.n_qubits) * self.detuning(phi_ext)? * tau + theta;
        Ok(fringe(self.envelope(tau), phase))
    }

    /// Probabilities over a flux grid at a common delay.
    pub fn pattern_grid(&self, fluxes: &[f64], tau: f64) -> Result<Vec<f64>> {
        self.pattern_grid_with_phase(fluxes, tau, 0.0)
    }

    pub fn pattern_grid_with_phase(
        &self,
        fluxes: &[f64],
        tau: f64,
        theta: f64,
    ) -> Result<Vec<f64>> {
        let envelope = self.envelope(tau);
        let n = f64::from(self.n_qubits);
        fluxes
            .iter()
            .map(|&phi| Ok(fringe(envelope, n * self.detuning(phi)? * tau + theta)))
            .collect()
    }
}

fn fringe(envelope: f64, phase: f64) -> f64 {
    (0.5 + 0.5 * envelope * phase.cos()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn evaluator(n: u32) -> FringeEvaluator {
        FringeEvaluator::new(SensorDesign::default(), FluxBias::new(0.442).unwrap(), n).unwrap()
    }

    #[test]
    fn resonant_cold_noiseless_is_one() {
        let cold = SensorDesign {
            temperature: 0.0,
            ..SensorDesign::default()
        };
        let ev = FringeEvaluator::new(cold, FluxBias::new(0.442).unwrap(), 1)
            .unwrap()
            .with_decoherence(false);
        for tau in [0.0, 1e-7, 3e-6, 1e-3] {
            assert_eq!(ev.probability_excited(0.0, tau).unwrap(), 1.0);
        }
    }

    #[test]
    fn long_delay_decays_to_half() {
        let ev = evaluator(1);
        let p = ev.probability_excited(1e-6, 1e-3).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_qubits_oscillate_twice_as_fast() {
        // First zero of the cosine in τ at fixed flux: N·Δω·τ = π/2.
        let phi_ext = 2e-6;
        let one = evaluator(1).with_decoherence(false);
        let two = evaluator(2).with_decoherence(false);
        let dw = one.detuning(phi_ext).unwrap().abs();
        let tau1 = PI / (2.0 * dw);
        let tau2 = tau1 / 2.0;
        let v = one.visibility();
        assert!((one.probability_excited(phi_ext, tau1).unwrap() - 0.5).abs() < 1e-12);
        assert!((two.probability_excited(phi_ext, tau2).unwrap() - 0.5).abs() < 1e-12);
        let early = two.probability_excited(phi_ext, 0.9 * tau2).unwrap();
        assert!(early > 0.5 && early < 0.5 + 0.5 * v);
    }

    #[test]
    fn detuning_reference_and_custom_drive() {
        let ev = evaluator(1);
        assert_eq!(ev.detuning(0.0).unwrap(), 0.0);
        let shifted = ev
            .clone()
            .with_drive_frequency(ev.drive_omega() - 1e6)
            .unwrap();
        assert!((shifted.detuning(0.0).unwrap() - 1e6).abs() < 1e-3);
        assert!(ev.clone().with_drive_frequency(0.0).is_err());
    }

    #[test]
    fn domain_errors_propagate() {
        let ev = evaluator(1);
        assert!(matches!(
            ev.probability_excited(0.06, 1e-7),
            Err(Error::FluxDomain { .. })
        ));
        assert!(ev.probability_excited(-0.443, 1e-7).is_err());
        assert!(ev.probability_excited(0.0, -1.0).is_err());
        assert!(ev.pattern_grid(&[0.0, 0.1], 1e-7).is_err());
    }

    #[test]
    fn single_point_grid_matches_pointwise() {
        let ev = evaluator(3);
        let p = ev.probability_excited(3.3e-5, 1e-7).unwrap();
        assert_eq!(ev.pattern_grid(&[3.3e-5], 1e-7).unwrap(), vec![p]);
    }

    #[test]
    fn envelope_scales_with_qubit_count() {
        let (one, three) = (evaluator(1), evaluator(3));
        let v = one.visibility();
        for tau in [1e-7, 1e-6, 4e-6] {
            let l1 = (one.envelope(tau) / v).ln();
            let l3 = (three.envelope(tau) / v).ln();
            assert!((l3 - 3.0 * l1).abs() <= 1e-12 * l3.abs());
        }
    }
}
