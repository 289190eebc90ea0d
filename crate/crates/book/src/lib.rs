//! The guide's chapters, compiled so every listing runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/spectrum.md")]
pub mod spectrum {}

#[doc = include_str!("../../../book/src/decoherence.md")]
pub mod decoherence {}

#[doc = include_str!("../../../book/src/optimal_point.md")]
pub mod optimal_point {}

#[doc = include_str!("../../../book/src/fringes.md")]
pub mod fringes {}

#[doc = include_str!("../../../book/src/phase_estimation.md")]
pub mod phase_estimation {}

#[doc = include_str!("../../../book/src/inductance.md")]
pub mod inductance {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
