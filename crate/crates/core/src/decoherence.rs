//! Relaxation and pure-dephasing rates of the sensor qubit.
//!
//! Relaxation channels: Purcell decay through the readout resonator, inductive
//! loss into the flux-bias line and capacitive loss into the drive line.
//! Radiative, dielectric and quasiparticle channels are negligible for the
//! x-mon geometry and are carried as explicit zeros.
//!
//! Dephasing comes from 1/f flux noise (a Gaussian term from the linear
//! coupling and an exponential term from the quadratic one) and 1/f
//! critical-current noise (Gaussian). The Ramsey envelope is
//! `exp(−Aτ − B²τ²)` with
//!
//! ```text
//! A = (Γ₁ᶜᵃᵛ + Γ₁ⁱⁿᵈ + Γ₁ᶜᵃᵖ)/2 + Γ_φ,exp
//! B = √(Γ_φ,flux² + Γ_φ,curr²)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::qubit::{FluxBias, SensorDesign};

/// Every decay channel at one bias point, in s⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma1_cav: f64,
    pub gamma1_ind: f64,
    pub gamma1_cap: f64,
    pub gamma1_radiative: f64,
    pub gamma1_dielectric: f64,
    pub gamma1_quasiparticle: f64,
    /// Exponential-decay rate of the quadratic flux-noise term.
    pub gamma_phi_flux_exp: f64,
    /// Gaussian-decay rate of the linear flux-noise term.
    pub gamma_phi_flux_gauss: f64,
    /// Gaussian-decay rate of critical-current noise.
    pub gamma_phi_curr_gauss: f64,
    /// Exponential envelope rate.
    pub a: f64,
    /// Gaussian envelope rate.
    pub b: f64,
}

impl DecayRates {
    /// Total energy relaxation rate Γ₁.
    pub fn gamma1(&self) -> f64 {
        self.gamma1_cav
            + self.gamma1_ind
            + self.gamma1_cap
            + self.gamma1_radiative
            + self.gamma1_dielectric
            + self.gamma1_quasiparticle
    }
}

/// Single-mode Purcell rate κ·g₀₁²/Δ².
pub fn purcell_rate(design: &SensorDesign, bias: FluxBias) -> f64 {
    let g = design.coupling_g01(bias);
    design.kappa * g * g / (design.delta * design.delta)
}

/// Relaxation through the mutual inductances to the flux-bias line.
pub fn inductive_rate(design: &SensorDesign, bias: FluxBias) -> f64 {
    let omega = design.angular_frequency(bias);
    let m2 = design.m_ind.powi(2) + design.m_parasitic.powi(2);
    m2 * omega * omega / (design.josephson_inductance(bias) * design.z0)
}

/// Relaxation through the coupling capacitance to the drive line.
pub fn capacitive_rate(design: &SensorDesign, bias: FluxBias) -> f64 {
    let omega = design.angular_frequency(bias);
    omega * omega * design.z0 * design.c_c.powi(2) / design.c_qg
}

/// Flux-noise dephasing rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxDephasing {
    /// α·|∂ω/∂Φ|, the Gaussian rate.
    pub gauss: f64,
    /// π²α²·|∂²ω/∂Φ²|, the exponential rate.
    pub exp: f64,
}

pub fn flux_dephasing_rates(design: &SensorDesign, bias: FluxBias) -> FluxDephasing {
    let d = design.spectrum_derivatives(bias);
    let alpha = design.alpha_flux;
    FluxDephasing {
        gauss: alpha * d.d_omega_d_phi.abs(),
        exp: PI * PI * alpha * alpha * d.d2_omega_d_phi2.abs(),
    }
}

/// γ·I_c·|∂ω/∂I_c| = πγ(f_max + E_C/h)√cos(πφ).
pub fn critical_current_dephasing_rate(design: &SensorDesign, bias: FluxBias) -> f64 {
    design.gamma_ic * design.spectrum_derivatives(bias).ic_d_omega_d_ic
}

/// All channels plus the composite envelope rates at `bias`.
pub fn composite_rates(design: &SensorDesign, bias: FluxBias) -> DecayRates {
    let gamma1_cav = purcell_rate(design, bias);
    let gamma1_ind = inductive_rate(design, bias);
    let gamma1_cap = capacitive_rate(design, bias);
    let flux = flux_dephasing_rates(design, bias);
    let curr = critical_current_dephasing_rate(design, bias);
    DecayRates {
        gamma1_cav,
        gamma1_ind,
        gamma1_cap,
        gamma1_radiative: 0.0,
        gamma1_dielectric: 0.0,
        gamma1_quasiparticle: 0.0,
        gamma_phi_flux_exp: flux.exp,
        gamma_phi_flux_gauss: flux.gauss,
        gamma_phi_curr_gauss: curr,
        a: 0.5 * (gamma1_cav + gamma1_ind + gamma1_cap) + flux.exp,
        b: flux.gauss.hypot(curr),
    }
}

/// One row of the rates table, in kHz (s⁻¹/1000, no 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatesRow {
    pub phi: f64,
    pub gamma1_cav_khz: f64,
    pub gamma1_ind_khz: f64,
    pub gamma1_cap_khz: f64,
    pub gammaphi_flux_exp_khz: f64,
    pub gammaphi_flux_gauss_khz: f64,
    pub gammaphi_curr_khz: f64,
}

pub fn rates_table(design: &SensorDesign, fluxes: &[FluxBias]) -> Vec<RatesRow> {
    fluxes
        .iter()
        .map(|&bias| {
            let r = composite_rates(design, bias);
            RatesRow {
                phi: bias.phi(),
                gamma1_cav_khz: r.gamma1_cav / 1e3,
                gamma1_ind_khz: r.gamma1_ind / 1e3,
                gamma1_cap_khz: r.gamma1_cap / 1e3,
                gammaphi_flux_exp_khz: r.gamma_phi_flux_exp / 1e3,
                gammaphi_flux_gauss_khz: r.gamma_phi_flux_gauss / 1e3,
                gammaphi_curr_khz: r.gamma_phi_curr_gauss / 1e3,
            }
        })
        .collect()
}
