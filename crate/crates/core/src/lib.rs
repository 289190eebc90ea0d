//! Design optimization and phase-estimation simulation for flux sensors built
//! from frequency-tunable transmon qubits.
//!
//! The crate is organised bottom-up:
//!
//! * [`qubit`] holds the device description ([`SensorDesign`]), the flux bias
//!   type and the flux-dependent transmon spectrum with its derivatives.
//! * [`decoherence`] turns a design into per-channel relaxation and dephasing
//!   rates and the two envelope rates `A` and `B` of the Ramsey signal.
//! * [`fringe`] evaluates single-qubit Ramsey and N-qubit GHZ probability
//!   patterns; [`projection`] checks the two-qubit entangle/evolve/project
//!   gate sequence on an explicit state vector.
//! * [`optimizer`] maximizes the flux sensitivity over bias and delay.
//! * [`pea`] runs seeded Monte-Carlo Kitaev phase-estimation campaigns.
//! * [`magnetostatics`] computes bias-line mutual inductances from the
//!   Biot–Savart field of a filamentary T-shaped line.
//! * [`config`], [`report`] and [`manifest`] are the file-format plumbing used
//!   by the command-line tool.
//!
//! Unit policy: frequencies are stored in Hz, angular frequencies and all rates
//! in s⁻¹ (rad/s), times in seconds and flux in units of the flux quantum Φ₀.
//!
//! ```
//! use fluxsense::{FluxBias, SensorDesign};
//!
//! let design = SensorDesign::default();
//! let f = design.transition_frequency(FluxBias::new(0.0)?);
//! assert_eq!(f, 9.0e9);
//! # Ok::<(), fluxsense::Error>(())
//! ```

pub mod config;
pub mod constants;
pub mod decoherence;
mod error;
pub mod fringe;
pub mod magnetostatics;
pub mod manifest;
pub mod optimizer;
pub mod pea;
pub mod projection;
pub mod quadrature;
pub mod qubit;
pub mod report;

pub use constants::PhysicalConstants;
pub use decoherence::DecayRates;
pub use error::{Error, Result};
pub use fringe::FringeEvaluator;
pub use magnetostatics::BiasLineGeometry;
pub use optimizer::OptimalPoint;
pub use pea::{PeaCampaignResult, PeaConfig};
pub use qubit::{FluxBias, SensorDesign};
