//! Simulator for a single particle coherently delocalized over `N` spatial
//! modes, together with the communication games such a particle can play.
//!
//! The crate has three layers:
//!
//! * [`fock`]: pure states, density operators, phase encoding, mode unitaries
//!   (including the discrete Fourier transform), and position measurement.
//! * [`games`] and [`classical`]: the win conditions of the guessing games,
//!   exact classical bounds obtained by exhaustive enumeration, one-way
//!   causal decompositions, and the polygon geometry of relay strategies.
//! * [`protocol`]: end-to-end runs of the quantum protocols for two and `N`
//!   parties, plus noise sweeps with analytic threshold predictions.
//!
//! All numeric code is generic over a [`scalar::Scalar`] floating type; the
//! `*64` aliases at the crate root pin `f64` and are what most callers want.
//! Exact results (game bounds, decomposition weights) use rationals, not
//! floats.

pub mod classical;
pub mod cmatrix;
pub mod error;
pub mod fock;
pub mod games;
pub mod protocol;
pub mod scalar;

pub use num_complex::Complex;
pub use num_rational::{BigRational, Rational64};

pub use cmatrix::CMatrix;
pub use error::{Error, Result};
pub use fock::{DensityState, MeasurementOutcome, ModeUnitary, SingleParticleState};
pub use games::{AnswerVector, BipartiteBehavior, GameInstance};
pub use protocol::{
    InstanceRecord, NPartyRun, NoiseKind, NoiseModel, NoiseThreshold, ProtocolResult,
};
pub use scalar::Scalar;

pub type SingleParticleState64 = SingleParticleState<f64>;
pub type ModeUnitary64 = ModeUnitary<f64>;
pub type DensityState64 = DensityState<f64>;
pub type MeasurementOutcome64 = MeasurementOutcome<f64>;
pub type BipartiteBehavior64 = BipartiteBehavior<f64>;
pub type ProtocolResult64 = ProtocolResult<f64>;
pub type NoiseModel64 = NoiseModel<f64>;
