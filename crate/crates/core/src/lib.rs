//! Simulator for a three-cavity optical chain with balanced gain and loss.
//!
//! The chain couples a lossy cavity and an amplifying cavity to a neutral
//! central one. This crate builds the non-Hermitian single-photon Hamiltonian,
//! classifies the symmetry phase of its spectrum, measures eigenstate
//! parity-time symmetry, and propagates single-photon amplitudes both in
//! closed form and with independent numerical integrators, so the two routes
//! can always be checked against each other.

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod params;
pub mod propagator;
pub mod pt;
pub mod verify;

pub use dynamics::{AmplitudeState, DerivedParams, InitialSite, Method, Trajectory};
pub use eigen::{Spectrum, TrimmerSpectralData};
pub use error::{Error, Result};
pub use hamiltonian::build_hamiltonian;
pub use matrix::ComplexMatrix;
pub use params::{classify_phase, classify_phase_default, PhaseClass, SystemParams};
pub use propagator::IntegratorConfig;
pub use pt::PtCheckResult;
