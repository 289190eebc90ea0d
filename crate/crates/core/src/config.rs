//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored, keys are case-sensitive and may
//! appear once. Missing keys keep their defaults, which describe the 9 GHz
//! reference sensor at 40 mK. Values use the units named in the key suffix;
//! `kappa_mhz` and `delta_ghz` are ordinary frequencies (the 2π is applied
//! on load). Rectangle lists are `x1 x2 y1 y2` quadruples in µm separated by
//! `;`.
//!
//! ```text
//! # colder, faster sensor
//! f_q_max_ghz    = 12
//! temperature_mk = 20
//! n_qubits       = 3
//! squid_rects_um = 2 27 2.3 7.3; 2 25 7.3 17.8
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::magnetostatics::{BiasLineGeometry, Rect};
use crate::pea::{HalvingRule, PeaConfig};
use crate::qubit::{FluxBias, SensorDesign};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` appears more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ConfigError {
    /// The offending key, if the error concerns one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::DuplicateKey { key, .. }
            | ConfigError::BadValue { key, .. }
            | ConfigError::Invalid { key, .. } => Some(key),
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Syntax { line, .. }
            | ConfigError::UnknownKey { line, .. }
            | ConfigError::DuplicateKey { line, .. }
            | ConfigError::BadValue { line, .. } => Some(*line),
            ConfigError::Invalid { .. } => None,
        }
    }
}

/// Everything a run needs, with all defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RunConfig {
    pub design: SensorDesign,
    pub pea: PeaConfig,
    pub geometry: BiasLineGeometry,
    /// Operating point; `None` means the sensitivity optimum.
    pub bias_phi: Option<f64>,
}

/// Accepted keys, in the order [`RunConfig::to_text`] writes them.
pub const KEYS: &[&str] = &[
    "f_q_max_ghz",
    "e_c_ghz",
    "kappa_mhz",
    "delta_ghz",
    "z0_ohm",
    "beta",
    "c_c_ff",
    "c_qg_ff",
    "m_ph",
    "m_parasitic_ph",
    "alpha_flux",
    "gamma_ic",
    "temperature_mk",
    "bias_phi",
    "tau_min_ns",
    "n_qubits",
    "base_grid_points",
    "target_pool_points",
    "sigma0",
    "sigma1",
    "epsilon",
    "n_steps",
    "n_targets",
    "n_repetitions",
    "seed",
    "decoherence",
    "halving",
    "max_measurements",
    "x_a_um",
    "width_a_um",
    "width_bc_um",
    "squid_rects_um",
    "gap_rects_um",
];

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if seen.contains(&key) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        seen.push(key);
        apply(&mut cfg, key, value).map_err(|reason| ConfigError::BadValue {
            line,
            key: key.to_string(),
            reason,
        })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn number(value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{value}` is not finite"))
    }
}

fn integer<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("`{value}` is not a non-negative integer"))
}

fn flag(value: &str) -> Result<bool, String> {
    match value {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        _ => Err(format!("`{value}` is not one of on/off")),
    }
}

fn rects_um(value: &str) -> Result<Vec<Rect>, String> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|quad| {
            let v = quad
                .split_whitespace()
                .map(number)
                .collect::<Result<Vec<_>, _>>()?;
            let [x1, x2, y1, y2] = v[..] else {
                return Err(format!("rectangle `{quad}` needs four numbers"));
            };
            Rect::from_um(x1, x2, y1, y2).map_err(|e| e.to_string())
        })
        .collect()
}

fn apply(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    let d = &mut cfg.design;
    let p = &mut cfg.pea;
    let g = &mut cfg.geometry;
    match key {
        "f_q_max_ghz" => d.f_q_max = number(value)? * 1e9,
        "e_c_ghz" => d.e_c_over_h = number(value)? * 1e9,
        "kappa_mhz" => d.kappa = 2.0 * PI * number(value)? * 1e6,
        "delta_ghz" => d.delta = 2.0 * PI * number(value)? * 1e9,
        "z0_ohm" => d.z0 = number(value)?,
        "beta" => d.beta = number(value)?,
        "c_c_ff" => d.c_c = number(value)? * 1e-15,
        "c_qg_ff" => d.c_qg = number(value)? * 1e-15,
        "m_ph" => d.m_ind = number(value)? * 1e-12,
        "m_parasitic_ph" => d.m_parasitic = number(value)? * 1e-12,
        "alpha_flux" => d.alpha_flux = number(value)?,
        "gamma_ic" => d.gamma_ic = number(value)?,
        "temperature_mk" => d.temperature = number(value)? * 1e-3,
        "bias_phi" => cfg.bias_phi = Some(number(value)?),
        "tau_min_ns" => p.tau_min = number(value)? * 1e-9,
        "n_qubits" => p.n_qubits = integer(value)?,
        "base_grid_points" => p.base_grid_points = integer(value)?,
        "target_pool_points" => p.target_pool_points = integer(value)?,
        "sigma0" => p.sigma0 = number(value)?,
        "sigma1" => p.sigma1 = number(value)?,
        "epsilon" => p.epsilon = number(value)?,
        "n_steps" => p.n_steps = integer(value)?,
        "n_targets" => p.n_targets = integer(value)?,
        "n_repetitions" => p.n_repetitions = integer(value)?,
        "seed" => p.master_seed = integer(value)?,
        "decoherence" => p.decoherence_enabled = flag(value)?,
        "halving" => {
            p.halving = match value {
                "max_mass_window" => HalvingRule::MaxMassWindow,
                "index_halves" => HalvingRule::IndexHalves,
                _ => return Err(format!("`{value}` is not max_mass_window or index_halves")),
            }
        }
        "max_measurements" => p.max_measurements = integer(value)?,
        "x_a_um" => g.x_a = number(value)? * 1e-6,
        "width_a_um" => g.width_a = number(value)? * 1e-6,
        "width_bc_um" => g.width_bc = number(value)? * 1e-6,
        "squid_rects_um" => g.squid_loop = rects_um(value)?,
        "gap_rects_um" => g.gap = rects_um(value)?,
        _ => unreachable!("key list and handlers out of sync: {key}"),
    }
    Ok(())
}

/// Config key that sets a struct field, for error messages.
fn key_for_field(field: &str) -> &str {
    match field {
        "f_q_max" => "f_q_max_ghz",
        "e_c_over_h" => "e_c_ghz",
        "kappa" => "kappa_mhz",
        "delta" => "delta_ghz",
        "z0" => "z0_ohm",
        "c_c" => "c_c_ff",
        "c_qg" => "c_qg_ff",
        "m_ind" => "m_ph",
        "m_parasitic" => "m_parasitic_ph",
        "temperature" => "temperature_mk",
        "tau_min" => "tau_min_ns",
        "master_seed" => "seed",
        "x_a" => "x_a_um",
        "width_a" => "width_a_um",
        "width_bc" => "width_bc_um",
        "squid_loop" | "rectangle" => "squid_rects_um",
        other => other,
    }
}

fn to_config_error(e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { name, reason } => ConfigError::Invalid {
            key: key_for_field(name).to_string(),
            reason,
        },
        Error::FluxDomain { phi, limit } => ConfigError::Invalid {
            key: "bias_phi".to_string(),
            reason: format!("{phi} is outside (0, {limit}]"),
        },
        other => ConfigError::Invalid {
            key: String::new(),
            reason: other.to_string(),
        },
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.design.validate().map_err(to_config_error)?;
        self.pea.validate().map_err(to_config_error)?;
        self.geometry.validate().map_err(to_config_error)?;
        if let Some(phi) = self.bias_phi {
            FluxBias::new(phi).map_err(to_config_error)?;
            if phi == 0.0 {
                return Err(ConfigError::Invalid {
                    key: "bias_phi".to_string(),
                    reason: "the sweet spot has no flux sensitivity".to_string(),
                });
            }
        }
        Ok(())
    }

    /// Renders the configuration in the file format, every key included.
    pub fn to_text(&self) -> String {
        let d = &self.design;
        let p = &self.pea;
        let g = &self.geometry;
        let rects = |rs: &[Rect]| {
            rs.iter()
                .map(|r| {
                    format!(
                        "{} {} {} {}",
                        r.x1 * 1e6,
                        r.x2 * 1e6,
                        r.y1 * 1e6,
                        r.y2 * 1e6
                    )
                })
                .collect::<Vec<_>>()
                .join("; ")
        };
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("f_q_max_ghz", (d.f_q_max / 1e9).to_string());
        put("e_c_ghz", (d.e_c_over_h / 1e9).to_string());
        put("kappa_mhz", (d.kappa / (2.0 * PI * 1e6)).to_string());
        put("delta_ghz", (d.delta / (2.0 * PI * 1e9)).to_string());
        put("z0_ohm", d.z0.to_string());
        put("beta", d.beta.to_string());
        put("c_c_ff", (d.c_c * 1e15).to_string());
        put("c_qg_ff", (d.c_qg * 1e15).to_string());
        put("m_ph", (d.m_ind * 1e12).to_string());
        put("m_parasitic_ph", (d.m_parasitic * 1e12).to_string());
        put("alpha_flux", d.alpha_flux.to_string());
        put("gamma_ic", d.gamma_ic.to_string());
        put("temperature_mk", (d.temperature * 1e3).to_string());
        if let Some(phi) = self.bias_phi {
            put("bias_phi", phi.to_string());
        }
        put("tau_min_ns", (p.tau_min * 1e9).to_string());
        put("n_qubits", p.n_qubits.to_string());
        put("base_grid_points", p.base_grid_points.to_string());
        put("target_pool_points", p.target_pool_points.to_string());
        put("sigma0", p.sigma0.to_string());
        put("sigma1", p.sigma1.to_string());
        put("epsilon", p.epsilon.to_string());
        put("n_steps", p.n_steps.to_string());
        put("n_targets", p.n_targets.to_string());
        put("n_repetitions", p.n_repetitions.to_string());
        put("seed", p.master_seed.to_string());
        put(
            "decoherence",
            if p.decoherence_enabled { "on" } else { "off" }.to_string(),
        );
        put(
            "halving",
            match p.halving {
                HalvingRule::MaxMassWindow => "max_mass_window",
                HalvingRule::IndexHalves => "index_halves",
            }
            .to_string(),
        );
        put("max_measurements", p.max_measurements.to_string());
        put("x_a_um", (g.x_a * 1e6).to_string());
        put("width_a_um", (g.width_a * 1e6).to_string());
        put("width_bc_um", (g.width_bc * 1e6).to_string());
        put("squid_rects_um", rects(&g.squid_loop));
        if !g.gap.is_empty() {
            put("gap_rects_um", rects(&g.gap));
        }
        out
    }
}
