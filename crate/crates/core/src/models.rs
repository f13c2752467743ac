//! Benchmark systems with exactly solvable parts: the harmonic oscillator
//! split into drift and kick, and the Volterra–Lotka system split into its
//! `u` and `v` equations.

use num_complex::Complex;

use crate::engine::{FlowFailure, Observable, SplitSystem};
use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// Largest real part allowed in a flow exponent.
pub const EXPONENT_GUARD: f64 = 700.0;

/// Names accepted by [`system_by_name`].
pub const SYSTEM_NAMES: [&str; 2] = ["harmonic", "vl"];

/// `q' = p, p' = -q`, split into the drift `A` (part 0, `q' = p`) and the
/// kick `B` (part 1, `p' = -q`).
#[derive(Debug, Clone, Copy, Default)]
pub struct HarmonicSystem;

/// Exact drift: `(q + z p, p)`.
pub fn harmonic_flow_a<T: Real>(z: Complex<T>, x: &mut [Complex<T>]) {
    x[0] += z * x[1];
}

/// Exact kick: `(q, p − z q)`.
pub fn harmonic_flow_b<T: Real>(z: Complex<T>, x: &mut [Complex<T>]) {
    x[1] -= z * x[0];
}

/// Exact solution at time `t`, a clockwise rotation of `(q0, p0)`.
pub fn harmonic_reference<T: Real>(t: T, (q0, p0): (T, T)) -> (T, T) {
    let (s, c) = t.sin_cos();
    (q0 * c + p0 * s, -q0 * s + p0 * c)
}

/// `(p² + q²) / 2` on real parts.
pub fn harmonic_energy<T: Real>(x: &[Complex<T>]) -> T {
    (x[0].re * x[0].re + x[1].re * x[1].re) * T::lit(0.5)
}

impl<T: Real> SplitSystem<T> for HarmonicSystem {
    fn name(&self) -> &str {
        "harmonic"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn parts(&self) -> usize {
        2
    }

    fn flow(&self, part: usize, z: Complex<T>, x: &mut [Complex<T>]) -> Result<(), FlowFailure> {
        match part {
            0 => harmonic_flow_a(z, x),
            1 => harmonic_flow_b(z, x),
            _ => return Err(FlowFailure(format!("no part {part}"))),
        }
        Ok(())
    }

    fn observables(&self) -> Vec<Observable<T>> {
        vec![
            Observable::new("q", |_, x: &[Complex<T>]| Some(x[0].re)),
            Observable::new("p", |_, x: &[Complex<T>]| Some(x[1].re)),
            Observable::new("energy", |_, x: &[Complex<T>]| Some(harmonic_energy(x))),
        ]
    }
}

/// `position_error` (Euclidean distance of the real parts of `(q, p)` from
/// the exact rotation) and `energy_error` (absolute), for a run started at
/// `(q0, p0)`.
pub fn harmonic_error_observables<T: Real>(q0: T, p0: T) -> Vec<Observable<T>> {
    let e0 = (q0 * q0 + p0 * p0) * T::lit(0.5);
    vec![
        Observable::new("position_error", move |t, x: &[Complex<T>]| {
            let (q, p) = harmonic_reference(t, (q0, p0));
            Some((x[0].re - q).hypot(x[1].re - p))
        }),
        Observable::new("energy_error", move |_, x: &[Complex<T>]| {
            Some((harmonic_energy(x) - e0).abs())
        }),
    ]
}

/// `u' = u(v − 2)`, `v' = v(1 − u)`, split into the `u` equation (part 0,
/// `v` frozen) and the `v` equation (part 1, `u` frozen).
#[derive(Debug, Clone, Copy, Default)]
pub struct VolterraLotkaSystem;

fn guarded_exp<T: Real>(exponent: Complex<T>) -> Result<Complex<T>, FlowFailure> {
    if exponent.re.abs() > T::lit(EXPONENT_GUARD) || !exponent.re.is_finite() {
        return Err(FlowFailure(format!(
            "exponent {exponent} outside the overflow guard"
        )));
    }
    Ok(exponent.exp())
}

/// Exact flow of part A: `(u e^{(v−2) z}, v)`.
pub fn vl_flow_a<T: Real>(z: Complex<T>, x: &mut [Complex<T>]) -> Result<(), FlowFailure> {
    x[0] *= guarded_exp((x[1] - T::lit(2.0)) * z)?;
    Ok(())
}

/// Exact flow of part B: `(u, v e^{(1−u) z})`.
pub fn vl_flow_b<T: Real>(z: Complex<T>, x: &mut [Complex<T>]) -> Result<(), FlowFailure> {
    x[1] *= guarded_exp((re(T::one()) - x[0]) * z)?;
    Ok(())
}

/// First integral `ln(u v²) − (u + v)` of the real parts; `None` outside
/// `u, v > 0`.
pub fn vl_invariant<T: Real>(u: T, v: T) -> Option<T> {
    if u > T::zero() && v > T::zero() {
        Some((u * v * v).ln() - (u + v))
    } else {
        None
    }
}

impl<T: Real> SplitSystem<T> for VolterraLotkaSystem {
    fn name(&self) -> &str {
        "vl"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn parts(&self) -> usize {
        2
    }

    fn flow(&self, part: usize, z: Complex<T>, x: &mut [Complex<T>]) -> Result<(), FlowFailure> {
        match part {
            0 => vl_flow_a(z, x),
            1 => vl_flow_b(z, x),
            _ => Err(FlowFailure(format!("no part {part}"))),
        }
    }

    fn observables(&self) -> Vec<Observable<T>> {
        vec![
            Observable::new("u", |_, x: &[Complex<T>]| Some(x[0].re)),
            Observable::new("v", |_, x: &[Complex<T>]| Some(x[1].re)),
            Observable::new("invariant", |_, x: &[Complex<T>]| {
                vl_invariant(x[0].re, x[1].re)
            }),
        ]
    }
}

/// `invariant_error`: `|I − I0| / |I0|` relative to the start `(u0, v0)`.
pub fn vl_error_observables<T: Real>(u0: T, v0: T) -> Result<Vec<Observable<T>>> {
    let i0 = vl_invariant(u0, v0).ok_or_else(|| {
        Error::InvalidArgument(format!("initial state ({u0}, {v0}) outside u, v > 0"))
    })?;
    Ok(vec![Observable::new(
        "invariant_error",
        move |_, x: &[Complex<T>]| vl_invariant(x[0].re, x[1].re).map(|i| ((i - i0) / i0).abs()),
    )])
}

/// Looks up a benchmark system by name.
pub fn system_by_name<T: Real>(name: &str) -> Result<Box<dyn SplitSystem<T>>> {
    match name.to_ascii_lowercase().as_str() {
        "harmonic" => Ok(Box::new(HarmonicSystem)),
        "vl" | "volterra-lotka" | "lotka-volterra" => Ok(Box::new(VolterraLotkaSystem)),
        _ => Err(Error::UnknownName {
            kind: "system",
            name: name.to_string(),
            available: SYSTEM_NAMES.join(", "),
        }),
    }
}

/// Initial state used by the benchmarks: `(1, 1)` for the oscillator,
/// `(2, 4)` for Volterra–Lotka.
pub fn default_initial_state<T: Real>(name: &str) -> Result<Vec<T>> {
    match system_by_name::<T>(name)?.name() {
        "harmonic" => Ok(vec![T::one(), T::one()]),
        _ => Ok(vec![T::lit(2.0), T::lit(4.0)]),
    }
}
