//! Sensor design parameters and the flux-tunable transmon spectrum.
//!
//! The 0–1 transition frequency of a split-junction transmon is parameterised
//! by its maximum `f_max` and the charging energy `E_C`:
//!
//! ```text
//! f_q(φ) = (f_max + E_C/h) · √cos(πφ) − E_C/h,     φ = Φ/Φ₀ ∈ [0, ½)
//! ```
//!
//! Everything else in the crate (coupling strengths, decay rates, fringe
//! patterns) is built on this curve and its flux derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{E, H, HBAR, K_B};
use crate::error::{Error, Result};

/// Largest accepted flux bias. The spectrum slope diverges at Φ₀/2, so the
/// last 1e-4 Φ₀ of the half period is rejected outright.
pub const PHI_LIMIT: f64 = 0.4999;

/// A static flux bias in units of Φ₀, restricted to `[0, PHI_LIMIT]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FluxBias(f64);

impl FluxBias {
    pub fn new(phi: f64) -> Result<Self> {
        if (0.0..=PHI_LIMIT).contains(&phi) {
            Ok(FluxBias(phi))
        } else {
            Err(Error::FluxDomain {
                phi,
                limit: PHI_LIMIT,
            })
        }
    }

    pub fn phi(self) -> f64 {
        self.0
    }

    /// The bias shifted by `delta` Φ₀, validated again.
    pub fn offset(self, delta: f64) -> Result<Self> {
        FluxBias::new(self.0 + delta)
    }
}

impl TryFrom<f64> for FluxBias {
    type Error = Error;

    fn try_from(phi: f64) -> Result<Self> {
        FluxBias::new(phi)
    }
}

impl From<FluxBias> for f64 {
    fn from(b: FluxBias) -> f64 {
        b.0
    }
}

/// Device and environment parameters of a single sensor qubit.
///
/// All fields are SI: Hz for `f_q_max` and `e_c_over_h`, rad/s for `kappa`
/// and `delta`, Ω, F, H and K for the rest. `alpha_flux` and `gamma_ic` are
/// the 1/f noise amplitudes in units of Φ₀ and of the critical current.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorDesign {
    pub f_q_max: f64,
    pub e_c_over_h: f64,
    pub kappa: f64,
    pub delta: f64,
    pub z0: f64,
    pub beta: f64,
    pub c_c: f64,
    pub c_qg: f64,
    pub m_ind: f64,
    pub m_parasitic: f64,
    pub alpha_flux: f64,
    pub gamma_ic: f64,
    pub temperature: f64,
}

impl Default for SensorDesign {
    /// The 9 GHz x-mon reference sensor at 40 mK.
    fn default() -> Self {
        SensorDesign {
            f_q_max: 9.0e9,
            e_c_over_h: 0.254e9,
            kappa: 2.0 * PI * 0.5e6,
            delta: 2.0 * PI * 2.0e9,
            z0: 50.0,
            beta: 0.03,
            c_c: 0.2e-15,
            c_qg: 76.0e-15,
            m_ind: 2.08e-12,
            m_parasitic: 0.22e-12,
            alpha_flux: 1e-6,
            gamma_ic: 1e-6,
            temperature: 0.040,
        }
    }
}

/// Flux and critical-current derivatives of the angular transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumDerivatives {
    /// ∂ω_q/∂Φ in rad·s⁻¹·Φ₀⁻¹ (non-positive on the half period).
    pub d_omega_d_phi: f64,
    /// ∂²ω_q/∂Φ² in rad·s⁻¹·Φ₀⁻².
    pub d2_omega_d_phi2: f64,
    /// I_c·∂ω_q/∂I_c in rad/s; times the fractional noise amplitude γ this is
    /// the Gaussian dephasing rate from critical-current noise.
    pub ic_d_omega_d_ic: f64,
}

impl SensorDesign {
    /// Checks every field against its physical range.
    pub fn validate(&self) -> Result<()> {
        if !(1e9..=2.5e10).contains(&self.f_q_max) {
            return Err(Error::invalid(
                "f_q_max",
                format!("{} Hz is outside [1 GHz, 25 GHz]", self.f_q_max),
            ));
        }
        let positive: [(&'static str, f64); 7] = [
            ("e_c_over_h", self.e_c_over_h),
            ("kappa", self.kappa),
            ("delta", self.delta),
            ("z0", self.z0),
            ("c_c", self.c_c),
            ("c_qg", self.c_qg),
            ("m_ind", self.m_ind),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        let non_negative: [(&'static str, f64); 5] = [
            ("beta", self.beta),
            ("m_parasitic", self.m_parasitic),
            ("alpha_flux", self.alpha_flux),
            ("gamma_ic", self.gamma_ic),
            ("temperature", self.temperature),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// `f_max + E_C/h`, the prefactor of the √cos law (Hz).
    pub fn plasma_sum(&self) -> f64 {
        self.f_q_max + self.e_c_over_h
    }

    /// Charging energy in joules.
    pub fn charging_energy(&self) -> f64 {
        H * self.e_c_over_h
    }

    /// 0–1 transition frequency in Hz.
    pub fn transition_frequency(&self, bias: FluxBias) -> f64 {
        self.plasma_sum() * (PI * bias.phi()).cos().sqrt() - self.e_c_over_h
    }

    /// Angular transition frequency ω_q = 2π f_q in rad/s.
    pub fn angular_frequency(&self, bias: FluxBias) -> f64 {
        2.0 * PI * self.transition_frequency(bias)
    }

    /// ω_q(φ + δ) − ω_q(φ) without the cancellation of subtracting two
    /// nearly equal ~10¹⁰ rad/s numbers.
    pub fn frequency_shift(&self, bias: FluxBias, delta: f64) -> Result<f64> {
        let shifted = bias.offset(delta)?;
        let a = PI * bias.phi();
        let b = PI * delta;
        let cos_diff = -2.0 * (a + 0.5 * b).sin() * (0.5 * b).sin();
        let sqrt_sum = (PI * shifted.phi()).cos().sqrt() + a.cos().sqrt();
        Ok(2.0 * PI * self.plasma_sum() * cos_diff / sqrt_sum)
    }

    /// Flux bias at which the transition frequency reaches zero. Beyond this
    /// point the √cos law no longer describes a qubit.
    pub fn zero_frequency_flux(&self) -> f64 {
        (self.e_c_over_h / self.plasma_sum()).powi(2).acos() / PI
    }

    pub fn spectrum_derivatives(&self, bias: FluxBias) -> SpectrumDerivatives {
        let f = self.plasma_sum();
        let (s, c) = (PI * bias.phi()).sin_cos();
        SpectrumDerivatives {
            d_omega_d_phi: -PI * PI * f * s / c.sqrt(),
            d2_omega_d_phi2: -PI.powi(3) * f * (1.0 + c * c) / (2.0 * c.powf(1.5)),
            ic_d_omega_d_ic: PI * f * c.sqrt(),
        }
    }

    /// Josephson inductance of the SQUID at the given bias (H).
    pub fn josephson_inductance(&self, bias: FluxBias) -> f64 {
        let ec = self.charging_energy();
        let omega_sum = 2.0 * PI * self.f_q_max + ec / HBAR;
        2.0 * ec / (E * E * omega_sum * omega_sum * (PI * bias.phi()).cos())
    }

    /// Qubit–resonator coupling g₀₁ in rad/s.
    pub fn coupling_g01(&self, bias: FluxBias) -> f64 {
        let ec = self.charging_energy();
        let omega_q = self.angular_frequency(bias);
        self.beta
            * E
            * (self.z0 / H).sqrt()
            * (omega_q + self.delta)
            * ((H * self.f_q_max + ec) / ec).sqrt()
            * (PI * bias.phi()).cos().powf(0.25)
    }
}

/// Fringe contrast left by thermal population of the excited state,
/// `(e^{hf/k_BT} − 1)/(e^{hf/k_BT} + 1) = tanh(hf/2k_BT)`.
///
/// Equals 1 at zero temperature. Non-positive frequencies give 0.
pub fn thermal_visibility(f_q: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    (H * f_q / (2.0 * K_B * temperature)).tanh().max(0.0)
}
