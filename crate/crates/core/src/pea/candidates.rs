use serde::{Deserialize, Serialize};

use super::config::HalvingRule;
use crate::error::{Error, Result};

/// A contiguous run of grid points with their posterior weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    start: usize,
    weights: Vec<f64>,
}

impl CandidateSet {
    /// Uniform prior over `len` points starting at grid index `start`.
    pub fn uniform(start: usize, len: usize) -> Self {
        CandidateSet {
            start,
            weights: vec![1.0 / len as f64; len],
        }
    }

    /// Weights are normalized on construction.
    pub fn from_weights(start: usize, weights: Vec<f64>) -> Result<Self> {
        let mut set = CandidateSet { start, weights };
        set.normalize(f64::NAN)?;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Grid index of the first candidate.
    pub fn start(&self) -> usize {
        self.start
    }

    /// One past the grid index of the last candidate.
    pub fn end(&self) -> usize {
        self.start + self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn contains(&self, grid_index: usize) -> bool {
        (self.start..self.end()).contains(&grid_index)
    }

    /// Σ wⱼ·xⱼ over the grid coordinates `x = spacing·index`.
    pub fn posterior_mean(&self, spacing: f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * spacing * (self.start + i) as f64)
            .sum()
    }

    /// Candidate with the largest weight; ties go to the lower index.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        self.start + best
    }

    fn normalize(&mut self, readout: f64) -> Result<()> {
        let total: f64 = self.weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::DegenerateLikelihood { readout });
        }
        let inv = 1.0 / total;
        self.weights.iter_mut().for_each(|w| *w *= inv);
        Ok(())
    }

    /// Bayes update for readout `x`, given each candidate's excited-state
    /// probability `p` (aligned with the candidates).
    pub fn update(&mut self, p: &[f64], x: f64, sigma0: f64, sigma1: f64) -> Result<()> {
        assert_eq!(
            p.len(),
            self.weights.len(),
            "probabilities must align with candidates"
        );
        let (l0, l1) = readout_likelihoods(x, sigma0, sigma1);
        for (w, &pj) in self.weights.iter_mut().zip(p) {
            *w *= pj * l1 + (1.0 - pj) * l0;
        }
        self.normalize(x)
    }

    /// Offset and mass of the heaviest half according to `rule`.
    pub fn best_half(&self, rule: HalvingRule) -> (usize, f64) {
        let half = self.weights.len() / 2;
        match rule {
            HalvingRule::IndexHalves => {
                let lower: f64 = self.weights[..half].iter().sum();
                let upper: f64 = self.weights[half..].iter().sum();
                if upper > lower {
                    (half, upper)
                } else {
                    (0, lower)
                }
            }
            HalvingRule::MaxMassWindow => {
                let mut mass: f64 = self.weights[..half].iter().sum();
                let (mut best, mut best_mass) = (0, mass);
                for off in 1..=self.weights.len() - half {
                    mass += self.weights[off + half - 1] - self.weights[off - 1];
                    if mass > best_mass {
                        best = off;
                        best_mass = mass;
                    }
                }
                // The running sum drifts; report an exact sum for the winner.
                (best, self.weights[best..best + half].iter().sum())
            }
        }
    }

    /// Keeps the heaviest half and renormalizes it.
    pub fn halve(&self, rule: HalvingRule) -> Result<CandidateSet> {
        let half = self.weights.len() / 2;
        let (off, _) = self.best_half(rule);
        CandidateSet::from_weights(self.start + off, self.weights[off..off + half].to_vec())
    }
}

/// Readout densities `(N(x; 0, σ₀), N(x; 1, σ₁))` scaled so the larger is 1.
pub fn readout_likelihoods(x: f64, sigma0: f64, sigma1: f64) -> (f64, f64) {
    let log0 = -0.5 * (x / sigma0).powi(2) - sigma0.ln();
    let log1 = -0.5 * ((x - 1.0) / sigma1).powi(2) - sigma1.ln();
    let top = log0.max(log1);
    ((log0 - top).exp(), (log1 - top).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_likelihood_leaves_weights() {
        let mut set = CandidateSet::from_weights(3, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let before = set.clone();
        set.update(&[0.7; 4], 0.31, 1.0, 1.0).unwrap();
        for (a, b) in set.weights().iter().zip(before.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
        set.update(&[0.0, 0.3, 0.9, 1.0], 0.5, 0.4, 0.4).unwrap();
        for (a, b) in set.weights().iter().zip(before.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn two_point_bayes() {
        let mut set = CandidateSet::uniform(0, 2);
        set.update(&[0.0, 1.0], 0.95, 0.1, 0.1).unwrap();
        // Likelihood ratio e^{(0.95² − 0.05²)/0.02} = e^{45}.
        let expect = 1.0 / (1.0 + (-45.0f64).exp());
        assert!((set.weights()[1] - expect).abs() < 1e-15);
        assert!(set.weights()[1] > 0.999);
    }

    #[test]
    fn underflow_is_reported() {
        let mut set = CandidateSet::uniform(0, 2);
        let err = set.update(&[1.0, 1.0], -500.0, 0.01, 0.01);
        assert_eq!(err, Err(Error::DegenerateLikelihood { readout: -500.0 }));
    }

    #[test]
    fn halves_by_rule() {
        let set = CandidateSet::from_weights(10, vec![0.05, 0.3, 0.3, 0.1, 0.15, 0.1]).unwrap();
        let idx = set.halve(HalvingRule::IndexHalves).unwrap();
        assert_eq!((idx.start(), idx.len()), (10, 3));
        let win = set.halve(HalvingRule::MaxMassWindow).unwrap();
        assert_eq!((win.start(), win.len()), (11, 3));
        let tie = CandidateSet::uniform(0, 4);
        assert_eq!(tie.best_half(HalvingRule::IndexHalves).0, 0);
        assert_eq!(tie.best_half(HalvingRule::MaxMassWindow).0, 0);
    }

    #[test]
    fn mean_and_mode() {
        let set = CandidateSet::from_weights(4, vec![0.25, 0.75]).unwrap();
        assert!((set.posterior_mean(2.0) - (0.25 * 8.0 + 0.75 * 10.0)).abs() < 1e-15);
        assert_eq!(set.mode(), 5);
    }
}
