use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::candidates::CandidateSet;
use super::config::PeaConfig;
use super::measurement::{run_stream, sample_measurement};
use crate::error::{Error, Result};
use crate::fringe::FringeEvaluator;
use crate::optimizer::{dynamic_range, optimal_delay};
use crate::qubit::{FluxBias, SensorDesign};

/// Equidistant flux grid of an N-qubit sensor, in Φ₀ relative to the bias.
///
/// The spacing is `Φ_max¹ / base_grid_points` for every N, so smaller
/// sensors' grids are prefixes of the single-qubit grid.
pub fn build_flux_grid(
    config: &PeaConfig,
    design: &SensorDesign,
    bias: FluxBias,
) -> Result<Vec<f64>> {
    config.validate()?;
    let spacing = grid_spacing(config, design, bias)?;
    Ok((0..config.grid_size())
        .map(|i| i as f64 * spacing)
        .collect())
}

fn grid_spacing(config: &PeaConfig, design: &SensorDesign, bias: FluxBias) -> Result<f64> {
    Ok(dynamic_range(design, bias, config.tau_min, 1)? / config.base_grid_points as f64)
}

/// One recorded readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub step: u32,
    pub tau: f64,
    pub theta: f64,
    pub value: f64,
}

/// What one step did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub survivors: CandidateSet,
    pub tau: f64,
    pub theta: f64,
    pub n_measurements: u32,
    /// The measurement cap ended the step before the mass test passed.
    pub capped: bool,
}

/// Per-step detail of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub tau: f64,
    pub theta: f64,
    pub n_measurements: u32,
    pub capped: bool,
    /// Posterior-mean flux after the step (Φ₀, relative to the bias).
    pub estimate: f64,
    /// Σ τᵢ·nᵢ up to and including this step (s).
    pub cumulative_time: f64,
    pub survivor_start: usize,
    pub survivor_count: usize,
}

/// One (target, repetition) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub target: usize,
    pub repetition: usize,
    pub target_index: usize,
    pub target_flux: f64,
    pub steps: Vec<StepRecord>,
}

/// A run plus, if requested, every readout it drew.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub record: RunRecord,
    pub final_set: CandidateSet,
    pub readouts: Option<Vec<Readout>>,
}

/// Campaign averages for one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub step: u32,
    /// Averaged total phase-accumulation time (s).
    pub tau_bar: f64,
    /// Averaged flux accuracy (Φ₀).
    pub accuracy: f64,
    pub mean_delay: f64,
    pub mean_measurements: f64,
    pub capped_runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeaCampaignResult {
    pub config: PeaConfig,
    pub bias_phi: f64,
    pub grid_spacing: f64,
    /// Saturation delay τ_opt^N; `None` without decoherence.
    pub tau_opt: Option<f64>,
    pub steps: Vec<StepSummary>,
    pub runs: Vec<RunRecord>,
}

/// Everything a campaign precomputes once: the N-qubit fringe model, the
/// detuning at every grid point and the delay cap.
#[derive(Debug, Clone)]
pub struct PeaSetup {
    config: PeaConfig,
    evaluator: FringeEvaluator,
    spacing: f64,
    /// Δω at grid indices `0..=grid_size`.
    detuning: Vec<f64>,
    tau_opt: f64,
}

impl PeaSetup {
    pub fn new(config: &PeaConfig, design: &SensorDesign, bias: FluxBias) -> Result<Self> {
        config.validate()?;
        design.validate()?;
        let evaluator = FringeEvaluator::new(design.clone(), bias, config.n_qubits)?
            .with_decoherence(config.decoherence_enabled);
        let spacing = grid_spacing(config, design, bias)?;
        let detuning = (0..=config.grid_size())
            .map(|i| evaluator.detuning(i as f64 * spacing))
            .collect::<Result<Vec<_>>>()?;
        let tau_opt = match evaluator.envelope_rates() {
            (a, b) if a == 0.0 && b == 0.0 => f64::INFINITY,
            (a, b) => optimal_delay(a, b, config.n_qubits)?,
        };
        Ok(PeaSetup {
            config: config.clone(),
            evaluator,
            spacing,
            detuning,
            tau_opt,
        })
    }

    pub fn config(&self) -> &PeaConfig {
        &self.config
    }

    pub fn evaluator(&self) -> &FringeEvaluator {
        &self.evaluator
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Delay cap, infinite without decoherence.
    pub fn tau_opt(&self) -> f64 {
        self.tau_opt
    }

    pub fn flux(&self, grid_index: usize) -> f64 {
        grid_index as f64 * self.spacing
    }

    /// Grid indices of the campaign targets: the centre of each of
    /// `n_targets` equal blocks of the target pool.
    pub fn targets(&self) -> Vec<usize> {
        let stride = self.config.target_stride();
        (0..self.config.n_targets)
            .map(|j| j * stride + stride / 2)
            .collect()
    }

    /// Delay and readout phase for the next step.
    ///
    /// The delay maps the candidates' flux span onto half a fringe period,
    /// bounded below by `tau_min` and above by τ_opt^N. The phase puts the
    /// span midpoint on a zero crossing of the fringe.
    pub fn choose_delay(&self, set: &CandidateSet) -> (f64, f64) {
        let n = f64::from(self.config.n_qubits);
        let span = (self.detuning[set.end()] - self.detuning[set.start()]).abs();
        let tau = (PI / (n * span)).max(self.config.tau_min).min(self.tau_opt);
        let mid = set.start() + set.len() / 2;
        let theta = FRAC_PI_2 - n * self.detuning[mid] * tau;
        (tau, theta)
    }

    /// Excited-state probability of grid point `index`.
    pub fn probability_at(&self, index: usize, tau: f64, theta: f64) -> f64 {
        let n = f64::from(self.config.n_qubits);
        fringe(
            self.evaluator.envelope(tau),
            n * self.detuning[index] * tau + theta,
        )
    }

    fn probabilities(&self, set: &CandidateSet, tau: f64, theta: f64) -> Vec<f64> {
        let n = f64::from(self.config.n_qubits);
        let envelope = self.evaluator.envelope(tau);
        self.detuning[set.start()..set.end()]
            .iter()
            .map(|dw| fringe(envelope, n * dw * tau + theta))
            .collect()
    }

    /// Measures the true flux until one half of `set` holds `1 − ε` of the
    /// mass or the cap is reached, then keeps that half.
    pub fn run_step<R: Rng + ?Sized>(
        &self,
        set: &CandidateSet,
        true_index: usize,
        step: u32,
        rng: &mut R,
        mut log: Option<&mut Vec<Readout>>,
    ) -> Result<StepOutcome> {
        if set.len() < 2 || set.len() % 2 != 0 {
            return Err(Error::invalid(
                "candidates",
                format!(
                    "a step needs an even set of at least two, got {}",
                    set.len()
                ),
            ));
        }
        let c = &self.config;
        let (tau, theta) = self.choose_delay(set);
        let p = self.probabilities(set, tau, theta);
        let p_true = self.probability_at(true_index, tau, theta);
        let mut posterior = set.clone();
        let mut n = 0u32;
        let capped = loop {
            let x = sample_measurement(p_true, c.sigma0, c.sigma1, rng);
            n += 1;
            if let Some(log) = log.as_deref_mut() {
                log.push(Readout {
                    step,
                    tau,
                    theta,
                    value: x,
                });
            }
            posterior.update(&p, x, c.sigma0, c.sigma1)?;
            if posterior.best_half(c.halving).1 >= 1.0 - c.epsilon {
                break false;
            }
            if n >= c.max_measurements {
                break true;
            }
        };
        Ok(StepOutcome {
            survivors: posterior.halve(c.halving)?,
            tau,
            theta,
            n_measurements: n,
            capped,
        })
    }

    /// A full run of `n_steps` steps against grid point `true_index`.
    pub fn run_single<R: Rng + ?Sized>(
        &self,
        true_index: usize,
        rng: &mut R,
        record_readouts: bool,
    ) -> Result<RunTrace> {
        let grid = self.config.grid_size();
        if true_index >= grid {
            return Err(Error::invalid(
                "true_index",
                format!("{true_index} is outside the {grid}-point grid"),
            ));
        }
        let mut readouts = record_readouts.then(Vec::new);
        let mut set = CandidateSet::uniform(0, grid);
        let mut elapsed = 0.0;
        let mut steps = Vec::with_capacity(self.config.n_steps as usize);
        for step in 1..=self.config.n_steps {
            let out = self.run_step(&set, true_index, step, rng, readouts.as_mut())?;
            elapsed += out.tau * f64::from(out.n_measurements);
            steps.push(StepRecord {
                tau: out.tau,
                theta: out.theta,
                n_measurements: out.n_measurements,
                capped: out.capped,
                estimate: out.survivors.posterior_mean(self.spacing),
                cumulative_time: elapsed,
                survivor_start: out.survivors.start(),
                survivor_count: out.survivors.len(),
            });
            set = out.survivors;
        }
        Ok(RunTrace {
            record: RunRecord {
                target: 0,
                repetition: 0,
                target_index: true_index,
                target_flux: self.flux(true_index),
                steps,
            },
            final_set: set,
            readouts,
        })
    }
}

fn fringe(envelope: f64, phase: f64) -> f64 {
    (0.5 + 0.5 * envelope * phase.cos()).clamp(0.0, 1.0)
}

/// Runs every (target, repetition) pair in parallel, each on its own random
/// stream, and averages the steps.
pub fn run_campaign(
    config: &PeaConfig,
    design: &SensorDesign,
    bias: FluxBias,
) -> Result<PeaCampaignResult> {
    let setup = PeaSetup::new(config, design, bias)?;
    let targets = setup.targets();
    let m = config.n_repetitions;
    let runs = (0..targets.len() * m)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx / m, idx % m);
            let mut rng = run_stream(config.master_seed, j, k);
            let mut trace = setup.run_single(targets[j], &mut rng, false)?;
            trace.record.target = j;
            trace.record.repetition = k;
            Ok(trace.record)
        })
        .collect::<Result<Vec<_>>>()?;
    let steps = summarize(config, &runs);
    Ok(PeaCampaignResult {
        config: config.clone(),
        bias_phi: bias.phi(),
        grid_spacing: setup.spacing(),
        tau_opt: setup.tau_opt().is_finite().then_some(setup.tau_opt()),
        steps,
        runs,
    })
}

/// Averaged total time and flux accuracy per step, with the `(M − 1)`
/// variance denominator. `runs` must be ordered target-major.
fn summarize(config: &PeaConfig, runs: &[RunRecord]) -> Vec<StepSummary> {
    let f = config.n_targets;
    let m = config.n_repetitions;
    let total = (f * m) as f64;
    (0..config.n_steps as usize)
        .map(|l| {
            let mut tau_sum = 0.0;
            let mut delay_sum = 0.0;
            let mut n_sum = 0.0;
            let mut capped = 0;
            let mut var_sum = 0.0;
            for chunk in runs.chunks(m) {
                let mut sq = 0.0;
                for run in chunk {
                    let s = &run.steps[l];
                    tau_sum += s.cumulative_time;
                    delay_sum += s.tau;
                    n_sum += f64::from(s.n_measurements);
                    capped += usize::from(s.capped);
                    sq += (s.estimate - run.target_flux).powi(2);
                }
                var_sum += sq / (m - 1) as f64;
            }
            StepSummary {
                step: l as u32 + 1,
                tau_bar: tau_sum / total,
                accuracy: (var_sum / f as f64).sqrt(),
                mean_delay: delay_sum / total,
                mean_measurements: n_sum / total,
                capped_runs: capped,
            }
        })
        .collect()
}
