//! Splitting and composition integrators with complex coefficients.
//!
//! Higher-order splitting methods with real coefficients must step backwards
//! in time; with complex coefficients of positive real part they need not.
//! This crate builds such schemes, checks their order conditions, steps
//! split systems with them and analyzes their linear stability on the
//! harmonic oscillator.
//!
//! * [`coeffs`]: scheme construction, conversion between the composition
//!   and a/b forms, the built-in catalog.
//! * [`order`]: algebraic order-condition residuals.
//! * [`engine`]: basic symmetric step, composition and a/b stepping,
//!   trajectories.
//! * [`linstab`]: polynomial one-step matrix on the oscillator, stability
//!   classification and phase.
//! * [`models`]: harmonic oscillator and Volterra–Lotka systems.
//!
//! Everything is generic over the real type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`.

// `!(x > 0)` style guards reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod engine;
mod error;
pub mod export;
pub mod linstab;
pub mod models;
pub mod order;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{csum, power_sum, Cplx, Real};

pub use coeffs::{Branch, SymmetryClass};
pub use engine::{Integrator, Observable, ProjectionPolicy, RunConfig, SplitSystem};
pub use linstab::Stability;
pub use order::OrderReport;

/// Complex scalar in double precision.
pub type Complex64 = num_complex::Complex<f64>;
pub type CompositionScheme = coeffs::CompositionScheme<f64>;
pub type TwoTermSplitScheme = coeffs::TwoTermSplitScheme<f64>;
pub type Trajectory = engine::Trajectory<f64>;
pub type Poly = linstab::Poly<f64>;
pub type PolyMatrix2 = linstab::PolyMatrix2<f64>;
pub type StabilityVerdict = linstab::StabilityVerdict<f64>;
pub type StabilityAnalysis = linstab::StabilityAnalysis<f64>;

/// Single-precision variants.
pub type Complex32 = num_complex::Complex<f32>;
pub type CompositionScheme32 = coeffs::CompositionScheme<f32>;
pub type TwoTermSplitScheme32 = coeffs::TwoTermSplitScheme<f32>;
pub type Trajectory32 = engine::Trajectory<f32>;
