//! Experiment harnesses behind the `csplit` binary: long-run error growth on
//! the harmonic oscillator, invariant drift on Volterra–Lotka, and
//! step-halving convergence studies.

pub mod convergence;
mod error;
pub mod experiments;
pub mod growth;

pub use error::{CliError, ExitCode};
