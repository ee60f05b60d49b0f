//! Divisibility of qubit and qudit dynamical maps.
//!
//! Decides CP-, P- and D-divisibility (D = decomposable propagators) for
//! Pauli qubit channels, generalized Pauli channels built from mutually
//! unbiased bases, and phase-covariant qubit channels, from their decoherence
//! rates. Numeric Choi and Bloch-ball oracles cross-check the rate criteria.

pub mod cli;
pub mod engine;
pub mod error;
pub mod gpc;
pub mod linalg;
pub mod mub;
pub mod phasecov;
pub mod qubit_pauli;
pub mod rates;
pub mod verdict;

pub use engine::{classify_timeline, ClassifyOptions, DivisibilityReport, FamilyKind, GeneratorSpec};
pub use error::{Error, Result};
pub use rates::RateFunction;
pub use verdict::Verdict;
