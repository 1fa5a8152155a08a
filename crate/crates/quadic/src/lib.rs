//! Exact analysis of the sixteen quaternary sequences built from quartic
//! cyclotomic classes of primes p = 5 (mod 8).
//!
//! The crate constructs the classes and sequences, computes generating
//! values and 4-adic complexity in exact big-integer arithmetic, machine
//! checks the congruence identities the complexity bounds rest on, and runs
//! a rational approximation attack to measure how many output digits an
//! attacker needs to reconstruct each sequence.
//!
//! Modules mirror the pipeline: [`cyclotomy`] -> [`seqgen`] -> [`adic`],
//! with [`verify`] and [`raa`] as independent checks and [`cli`] as the
//! batch/reporting layer.

pub mod adic;
pub mod cli;
pub mod cyclotomy;
pub mod error;
pub mod raa;
pub mod seqgen;
pub mod verify;

pub use error::{Error, Result};
