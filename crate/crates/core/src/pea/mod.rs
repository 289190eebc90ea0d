//! Monte-Carlo simulation of Kitaev phase estimation with 1–3 qubit sensors.
//!
//! Each run starts from a uniform prior over an equidistant flux grid. A step
//! picks a delay and readout phase from the surviving interval, draws noisy
//! readouts of the true flux and updates the posterior after each one, and
//! stops once one half of the candidates holds all but `ε` of the mass. The
//! other half is discarded, so after `l` steps `grid_size/2^l` candidates
//! remain and the delay has roughly doubled each step until it reaches the
//! sensor's optimal delay.
//!
//! Campaigns repeat this for many targets and repetitions, each on its own
//! random stream derived from the master seed, and report the averaged total
//! phase-accumulation time and flux accuracy per step.

mod campaign;
mod candidates;
mod config;
mod measurement;

pub use campaign::{
    build_flux_grid, run_campaign, PeaCampaignResult, PeaSetup, Readout, RunRecord, RunTrace,
    StepOutcome, StepRecord, StepSummary,
};
pub use candidates::{readout_likelihoods, CandidateSet};
pub use config::{HalvingRule, PeaConfig};
pub use measurement::{run_stream, sample_measurement};
