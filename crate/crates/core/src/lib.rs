//! Synthesis and verification of three-qubit gates from two-qubit gates.
//!
//! The crate covers:
//!
//! - [`linalg`]: small dense complex matrices and phase-invariant metrics.
//! - [`circuit`]: circuits of two-qubit gates on the register `A, B, C`.
//! - [`structure`]: controlled-gate detection, product states in 2-d
//!   subspaces, tensor factors of controlled pairs, local spectra.
//! - [`kak`]: canonical (KAK) decomposition of two-qubit unitaries,
//!   re-exported from [`structure`].
//! - [`synthesis`]: gate-count lower bound, doubly controlled gate
//!   classification and constructions, the controlled-swap circuit.
//! - [`search`]: fixed-structure fidelity optimization and optimality
//!   evidence reports.

pub mod circuit;
pub mod error;
pub mod gates;
pub mod kak;
pub mod linalg;
pub mod search;
pub mod structure;
pub mod synthesis;

pub use circuit::{Circuit, PairClass, Qubit, StructureSignature, TwoQubitGate};
pub use error::{Error, Result};
pub use kak::KakDecomposition;
pub use linalg::ComplexMatrix;
pub use search::{OptimalityReport, SearchConfig, SearchResult};
pub use synthesis::{CcuClass, GateCatalogEntry};

