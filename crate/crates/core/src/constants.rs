//! Physical constants (SI, CODATA 2018 exact definitions where available).

use std::f64::consts::PI;

/// Planck constant (J·s).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = H / (2.0 * PI);
/// Elementary charge (C).
pub const E: f64 = 1.602_176_634e-19;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permeability (H/m).
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Magnetic flux quantum h/2e (Wb).
pub const PHI_0: f64 = H / (2.0 * E);

/// The constants bundled as a value, for callers that want to pass them around
/// or serialize them alongside results.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub e: f64,
    pub k_b: f64,
    pub mu_0: f64,
    pub phi_0: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        h: H,
        hbar: HBAR,
        e: E,
        k_b: K_B,
        mu_0: MU_0,
        phi_0: PHI_0,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}
