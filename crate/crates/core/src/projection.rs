//! State-vector check of the two-qubit entangle → evolve → project sequence.
//!
//! Starting from `|00⟩` the entangler (Hadamards, a conditional phase on
//! `|10⟩`, and a −π/2 y-rotation on the second qubit) prepares
//! `(|00⟩ + |11⟩)/√2`. Free evolution in the external flux adds `e^{iφ}` to
//! `|11⟩`. The projector (y-rotation, conditional phase on `|00⟩`, two more
//! y-rotations) maps the Bell-state phase onto the first qubit:
//!
//! ```text
//! ((−1 + e^{iφ})/2 · |0⟩ + (−1 − e^{iφ})/2 · |1⟩) ⊗ |0⟩
//! ```
//!
//! so that `P(|10⟩) = cos²(φ/2)`.
//!
//! Basis states are indexed big-endian: qubit 0 is the most significant bit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

type Gate = [[Complex64; 2]; 2];

/// A pure state of `n` qubits plus the phase accumulated during evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequenceState {
    amplitudes: Vec<Complex64>,
    phase: f64,
}

impl GateSequenceState {
    /// All qubits in `|0⟩`.
    pub fn ground(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        GateSequenceState {
            amplitudes,
            phase: 0.0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, basis_index: usize) -> f64 {
        self.amplitudes[basis_index].norm_sqr()
    }

    /// Probability that `qubit` is measured in `|1⟩`.
    pub fn excited_probability(&self, qubit: usize) -> f64 {
        let mask = self.mask(qubit);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits() - 1 - qubit)
    }

    pub fn apply_single(&mut self, qubit: usize, gate: &Gate) {
        let mask = self.mask(qubit);
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | mask]);
                self.amplitudes[i] = gate[0][0] * a0 + gate[0][1] * a1;
                self.amplitudes[i | mask] = gate[1][0] * a0 + gate[1][1] * a1;
            }
        }
    }

    /// Conditional phase gate inverting the sign of one basis state only.
    pub fn apply_conditional_phase(&mut self, basis_index: usize) {
        self.amplitudes[basis_index] = -self.amplitudes[basis_index];
    }

    /// Multiplies one basis amplitude by `e^{iφ}` and records φ.
    pub fn accumulate_phase(&mut self, basis_index: usize, phase: f64) {
        self.amplitudes[basis_index] *= Complex64::from_polar(1.0, phase);
        self.phase += phase;
    }
}

pub fn hadamard() -> Gate {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Rotation about y by `angle`.
pub fn ry(angle: f64) -> Gate {
    let (s, c) = (0.5 * angle).sin_cos();
    let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
    [[c, -s], [s, c]]
}

/// Result of [`simulate_projection_sequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOutcome {
    pub state: GateSequenceState,
    /// Probability of reading `|10⟩`.
    pub p10: f64,
}

/// Runs the two-qubit sensing sequence with accumulated phase `phase` (rad).
pub fn simulate_projection_sequence(phase: f64) -> ProjectionOutcome {
    const S00: usize = 0b00;
    const S10: usize = 0b10;
    const S11: usize = 0b11;

    let mut state = GateSequenceState::ground(2);

    // entangler
    state.apply_single(0, &hadamard());
    state.apply_single(1, &hadamard());
    state.apply_conditional_phase(S10);
    state.apply_single(1, &ry(-FRAC_PI_2));

    state.accumulate_phase(S11, phase);

    // projector
    state.apply_single(1, &ry(FRAC_PI_2));
    state.apply_conditional_phase(S00);
    state.apply_single(1, &ry(FRAC_PI_2));
    state.apply_single(0, &ry(FRAC_PI_2));

    let p10 = state.probability(S10);
    ProjectionOutcome { state, p10 }
}
