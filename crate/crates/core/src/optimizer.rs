//! Flux sensitivity and its maximization over bias and delay.
//!
//! With the envelope rates frozen at the bias point, the slope of the Ramsey
//! fringe at a zero crossing gives the sensitivity
//!
//! ```text
//! S(φ, τ) = (τ/2) · V_th · e^{−Aτ − B²τ²} · |∂ω_q/∂Φ|      [Φ₀⁻¹]
//! ```
//!
//! For `N` qubits the envelope exponent picks up a factor `N`, and the delay
//! that maximizes `τ·e^{−N(Aτ+B²τ²)}` is the positive root of
//! `2NB²τ² + NAτ − 1 = 0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoherence::composite_rates;
use crate::error::{Error, Result};
use crate::qubit::{thermal_visibility, FluxBias, SensorDesign, PHI_LIMIT};

/// Coarse scan step of [`find_optimal_flux`].
pub const SCAN_STEP: f64 = 1e-3;
/// Final bracket width of the golden-section refinement.
pub const REFINE_TOL: f64 = 1e-7;

/// The best operating point of a design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalPoint {
    pub phi_star: f64,
    pub tau_opt: f64,
    /// Sensitivity at `(phi_star, tau_opt)`, Φ₀⁻¹.
    pub sensitivity: f64,
    pub t2: f64,
    pub n_steps: u32,
    pub dynamic_range: f64,
    /// Envelope rates at `phi_star`.
    pub a: f64,
    pub b: f64,
    pub tau_min: f64,
    /// The maximum sits on the upper end of the search interval.
    pub at_boundary: bool,
}

/// Delay maximizing the N-qubit sensitivity for envelope rates `a`, `b`.
pub fn optimal_delay(a: f64, b: f64, n_qubits: u32) -> Result<f64> {
    check_rates(a, b)?;
    if n_qubits == 0 {
        return Err(Error::invalid("n_qubits", "need at least one qubit"));
    }
    let n = f64::from(n_qubits);
    if b == 0.0 {
        return Ok(1.0 / (n * a));
    }
    // Rationalized root: 2/(NA + √(N²A² + 8NB²)), no cancellation when B ≪ A.
    Ok(2.0 / (n * a + (n * n * a * a + 8.0 * n * b * b).sqrt()))
}

/// Time at which the envelope `e^{−At − B²t²}` falls to 1/e.
pub fn coherence_time(a: f64, b: f64) -> Result<f64> {
    check_rates(a, b)?;
    if b == 0.0 {
        return Ok(1.0 / a);
    }
    Ok(2.0 / (a + (a * a + 4.0 * b * b).sqrt()))
}

fn check_rates(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(
            "envelope rates",
            format!("must be finite and non-negative, got A={a}, B={b}"),
        ));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::NoFiniteOptimum);
    }
    Ok(())
}

/// Single-qubit sensitivity at `bias` and delay `tau`, Φ₀⁻¹.
pub fn sensitivity(design: &SensorDesign, bias: FluxBias, tau: f64) -> Result<f64> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::invalid(
            "tau",
            format!("delay must be non-negative, got {tau}"),
        ));
    }
    let f_q = design.transition_frequency(bias);
    if f_q <= 0.0 {
        return Ok(0.0);
    }
    let rates = composite_rates(design, bias);
    let slope = design.spectrum_derivatives(bias).d_omega_d_phi.abs();
    let envelope = (-rates.a * tau - rates.b * rates.b * tau * tau).exp();
    Ok(0.5 * tau * thermal_visibility(f_q, design.temperature) * envelope * slope)
}

/// Sensitivity at the optimal single-qubit delay for `bias`.
pub fn sensitivity_at_optimal_delay(design: &SensorDesign, bias: FluxBias) -> Result<f64> {
    let rates = composite_rates(design, bias);
    sensitivity(design, bias, optimal_delay(rates.a, rates.b, 1)?)
}

/// `floor(log₂(2·tau_opt/tau_min))`, clamped at zero.
pub fn step_budget(tau_opt: f64, tau_min: f64) -> u32 {
    let ratio = 2.0 * tau_opt / tau_min;
    if !ratio.is_finite() || ratio < 1.0 {
        return 0;
    }
    let mut k = ratio.log2().floor() as i32;
    // log2 can be off by one ulp next to exact powers of two.
    while 2f64.powi(k + 1) <= ratio {
        k += 1;
    }
    while 2f64.powi(k) > ratio {
        k -= 1;
    }
    k.max(0) as u32
}

/// Largest flux an N-qubit sensor resolves unambiguously at delay `tau_min`.
pub fn dynamic_range(
    design: &SensorDesign,
    bias: FluxBias,
    tau_min: f64,
    n_qubits: u32,
) -> Result<f64> {
    if !(tau_min > 0.0 && tau_min.is_finite()) {
        return Err(Error::invalid(
            "tau_min",
            format!("must be positive, got {tau_min}"),
        ));
    }
    if n_qubits == 0 {
        return Err(Error::invalid("n_qubits", "need at least one qubit"));
    }
    let slope = design.spectrum_derivatives(bias).d_omega_d_phi.abs();
    if slope == 0.0 {
        return Err(Error::invalid(
            "bias",
            "the spectrum is flat at the sweet spot, the dynamic range is unbounded",
        ));
    }
    Ok(PI / (tau_min * slope * f64::from(n_qubits)))
}

/// Upper end of the flux search: the bias limit, or just below the point
/// where the qubit frequency reaches zero if that comes first.
pub fn search_upper_bound(design: &SensorDesign) -> f64 {
    PHI_LIMIT.min(design.zero_frequency_flux() - 1e-6)
}

/// Maximizes the single-qubit sensitivity over the flux bias.
///
/// A scan with step [`SCAN_STEP`] brackets the maximum, then golden-section
/// search narrows the bracket below [`REFINE_TOL`].
pub fn find_optimal_flux(design: &SensorDesign, tau_min: f64) -> Result<OptimalPoint> {
    design.validate()?;
    let upper = search_upper_bound(design);
    let objective =
        |phi: f64| -> Result<f64> { sensitivity_at_optimal_delay(design, FluxBias::new(phi)?) };

    let n_cells = (upper / SCAN_STEP).floor() as usize;
    let mut grid: Vec<f64> = (0..=n_cells).map(|i| i as f64 * SCAN_STEP).collect();
    if upper - grid[n_cells] > 1e-12 {
        grid.push(upper);
    }
    let values = grid
        .iter()
        .map(|&p| objective(p))
        .collect::<Result<Vec<_>>>()?;
    let best = argmax(&values);
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (mut phi_star, mut s_star) = golden_section_max(&objective, lo, hi, REFINE_TOL)?;
    if values[best] > s_star {
        phi_star = grid[best];
        s_star = values[best];
    }
    let at_boundary = upper - phi_star < 10.0 * REFINE_TOL;
    if at_boundary {
        phi_star = upper;
        s_star = objective(upper)?;
    }

    let bias = FluxBias::new(phi_star)?;
    let rates = composite_rates(design, bias);
    let tau_opt = optimal_delay(rates.a, rates.b, 1)?;
    Ok(OptimalPoint {
        phi_star,
        tau_opt,
        sensitivity: s_star,
        t2: coherence_time(rates.a, rates.b)?,
        n_steps: step_budget(tau_opt, tau_min),
        dynamic_range: dynamic_range(design, bias, tau_min, 1)?,
        a: rates.a,
        b: rates.b,
        tau_min,
        at_boundary,
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_section_max<F>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, f(mid)?))
}

/// One cell of the sensitivity surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub temperature: f64,
    pub f_q_max: f64,
    pub phi: f64,
    /// Sensitivity at the optimal delay, Φ₀⁻¹.
    pub sensitivity: f64,
}

/// Optimum along flux for one frequency and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgePoint {
    pub temperature: f64,
    pub f_q_max: f64,
    pub phi_star: f64,
    pub sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeScan {
    /// Row-major over (temperature, f_q_max, phi).
    pub surface: Vec<SurfaceCell>,
    /// Row-major over (temperature, f_q_max).
    pub ridge: Vec<RidgePoint>,
}

/// Sensitivity surface over `(f_q_max, φ)` and its per-frequency maxima, for
/// each temperature. Fluxes past the zero-frequency point score zero.
pub fn ridge_scan(
    base: &SensorDesign,
    f_q_max: &[f64],
    phi_grid: &[f64],
    temperatures: &[f64],
    tau_min: f64,
) -> Result<RidgeScan> {
    let designs: Vec<SensorDesign> = temperatures
        .iter()
        .flat_map(|&t| {
            f_q_max.iter().map(move |&f| SensorDesign {
                f_q_max: f,
                temperature: t,
                ..base.clone()
            })
        })
        .collect();
    for d in &designs {
        d.validate()?;
    }
    let biases = phi_grid
        .iter()
        .map(|&p| FluxBias::new(p))
        .collect::<Result<Vec<_>>>()?;

    let surface = designs
        .par_iter()
        .flat_map_iter(|d| {
            biases.iter().map(move |&bias| {
                Ok(SurfaceCell {
                    temperature: d.temperature,
                    f_q_max: d.f_q_max,
                    phi: bias.phi(),
                    sensitivity: sensitivity_at_optimal_delay(d, bias)?,
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ridge = designs
        .par_iter()
        .map(|d| {
            let opt = find_optimal_flux(d, tau_min)?;
            Ok(RidgePoint {
                temperature: d.temperature,
                f_q_max: d.f_q_max,
                phi_star: opt.phi_star,
                sensitivity: opt.sensitivity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RidgeScan { surface, ridge })
}
