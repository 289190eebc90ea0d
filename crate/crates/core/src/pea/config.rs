use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a step picks the surviving half of the candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalvingRule {
    /// The contiguous run of `len/2` candidates holding the most mass.
    MaxMassWindow,
    /// Either the lower or the upper half by index.
    IndexHalves,
}

/// Parameters of a Kitaev phase-estimation campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeaConfig {
    pub n_qubits: u32,
    /// Points of the single-qubit grid; the N-qubit grid has `base/N`.
    pub base_grid_points: usize,
    /// Points of the grid targets are drawn from. Must fit on every sensor's
    /// grid, so it defaults to the three-qubit size.
    pub target_pool_points: usize,
    /// Shortest delay, which fixes the dynamic range (s).
    pub tau_min: f64,
    /// Readout spread for the ground state.
    pub sigma0: f64,
    /// Readout spread for the excited state.
    pub sigma1: f64,
    /// A step ends once one half holds at least `1 − epsilon` of the mass.
    pub epsilon: f64,
    pub n_steps: u32,
    pub n_targets: usize,
    pub n_repetitions: usize,
    pub master_seed: u64,
    pub decoherence_enabled: bool,
    pub halving: HalvingRule,
    pub max_measurements: u32,
}

impl Default for PeaConfig {
    fn default() -> Self {
        PeaConfig::desk(1)
    }
}

impl PeaConfig {
    /// 32 targets × 8 repetitions × 9 steps.
    pub fn desk(n_qubits: u32) -> Self {
        PeaConfig {
            n_qubits,
            base_grid_points: 6144,
            target_pool_points: 2048,
            tau_min: 100e-9,
            sigma0: 1.0,
            sigma1: 1.0,
            epsilon: 1e-4,
            n_steps: 9,
            n_targets: 32,
            n_repetitions: 8,
            master_seed: 7,
            decoherence_enabled: true,
            halving: HalvingRule::MaxMassWindow,
            max_measurements: 10_000,
        }
    }

    /// 256 targets × 24 repetitions × 9 steps.
    pub fn full(n_qubits: u32) -> Self {
        PeaConfig {
            n_targets: 256,
            n_repetitions: 24,
            ..PeaConfig::desk(n_qubits)
        }
    }

    /// Number of grid points for this sensor.
    pub fn grid_size(&self) -> usize {
        self.base_grid_points / self.n_qubits.max(1) as usize
    }

    /// Spacing between neighbouring targets on the pool grid, in grid points.
    pub fn target_stride(&self) -> usize {
        self.target_pool_points / self.n_targets.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits as usize;
        if n == 0 {
            return Err(Error::invalid("n_qubits", "need at least one qubit"));
        }
        if self.base_grid_points == 0 || self.base_grid_points % n != 0 {
            return Err(Error::invalid(
                "base_grid_points",
                format!("{} is not divisible by N = {n}", self.base_grid_points),
            ));
        }
        let grid = self.grid_size();
        if self.n_steps == 0 || self.n_steps >= usize::BITS || grid % (1usize << self.n_steps) != 0
        {
            return Err(Error::invalid(
                "n_steps",
                format!(
                    "{} halvings do not divide a {grid}-point grid evenly",
                    self.n_steps
                ),
            ));
        }
        if self.target_pool_points == 0 || self.target_pool_points > grid {
            return Err(Error::invalid(
                "target_pool_points",
                format!("must be in [1, {grid}], got {}", self.target_pool_points),
            ));
        }
        if self.n_targets == 0 || self.n_targets > self.target_pool_points {
            return Err(Error::invalid(
                "n_targets",
                format!(
                    "must be in [1, {}], got {}",
                    self.target_pool_points, self.n_targets
                ),
            ));
        }
        if self.n_repetitions < 2 {
            return Err(Error::invalid(
                "n_repetitions",
                "the accuracy estimate needs at least two repetitions",
            ));
        }
        if !(self.tau_min > 0.0 && self.tau_min.is_finite()) {
            return Err(Error::invalid(
                "tau_min",
                format!("must be positive, got {}", self.tau_min),
            ));
        }
        for (name, s) in [("sigma0", self.sigma0), ("sigma1", self.sigma1)] {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {s}")));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::invalid(
                "epsilon",
                format!("must be in (0, 0.5), got {}", self.epsilon),
            ));
        }
        if self.max_measurements == 0 {
            return Err(Error::invalid("max_measurements", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let sizes: Vec<usize> = (1..=3).map(|n| PeaConfig::desk(n).grid_size()).collect();
        assert_eq!(sizes, vec![6144, 3072, 2048]);
        for n in 1..=3 {
            PeaConfig::desk(n).validate().unwrap();
            PeaConfig::full(n).validate().unwrap();
        }
    }

    #[test]
    fn presets() {
        let full = PeaConfig::full(3);
        assert_eq!(
            (full.n_targets, full.n_repetitions, full.n_steps),
            (256, 24, 9)
        );
        assert_eq!(full.target_stride(), 8);
        assert_eq!(PeaConfig::desk(1).target_stride(), 64);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            PeaConfig {
                epsilon: 0.5,
                ..PeaConfig::default()
            },
            PeaConfig {
                n_steps: 12,
                ..PeaConfig::desk(3)
            },
            PeaConfig {
                n_qubits: 5,
                ..PeaConfig::default()
            },
            PeaConfig {
                n_repetitions: 1,
                ..PeaConfig::default()
            },
            PeaConfig {
                sigma1: 0.0,
                ..PeaConfig::default()
            },
            PeaConfig {
                n_targets: 4096,
                ..PeaConfig::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
