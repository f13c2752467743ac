//! Algebraic order-condition residuals for compositions of symmetric
//! second-order steps, and the negativity property of real schemes.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use crate::coeffs::ab_arrays_from_chi;
use crate::error::{Error, Result};
use crate::scalar::{csum, re, Real};

/// Default tolerance for [`OrderReport::passes_at`].
pub const ORDER6_TOL: f64 = 1e-12;

/// Residual names in report order.
pub const RESIDUAL_NAMES: [&str; 7] = ["consistency", "p3", "p5", "c31", "c32", "c33", "c51"];

const ORDER1: &[&str] = &["consistency"];
const ORDER3: &[&str] = &["consistency", "p3"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub label: String,
    pub residuals: BTreeMap<&'static str, f64>,
    pub max_residual: f64,
    /// Largest of {1, 3, 6} whose residual subset is below the tolerance,
    /// 0 if none.
    pub passes_at: u32,
    pub tolerance: f64,
}

/// `c_j = α_j / 2 + Σ_{i<j} α_i`, the midpoint time of stage j.
pub fn c_weights<T: Real>(alphas: &[Complex<T>]) -> Vec<Complex<T>> {
    let half = T::lit(0.5);
    let mut prefix = re(T::zero());
    alphas
        .iter()
        .map(|a| {
            let cj = prefix + *a * half;
            prefix += *a;
            cj
        })
        .collect()
}

/// `|Σ α_j^k c_j^l|`.
fn weighted_sum<T: Real>(alphas: &[Complex<T>], cs: &[Complex<T>], k: i32, l: i32) -> T {
    alphas
        .iter()
        .zip(cs)
        .fold(re(T::zero()), |acc, (a, cj)| acc + a.powi(k) * cj.powi(l))
        .norm()
}

/// Evaluates the sixth-order condition set: consistency, `Σα^3`, `Σα^5` and
/// `Σ α^k c^l` for `(k, l) ∈ {(3,1), (3,2), (3,3), (5,1)}`.
pub fn order6_report<T: Real>(label: &str, alphas: &[Complex<T>], tol: f64) -> OrderReport {
    let cs = c_weights(alphas);
    let values = [
        (csum(alphas) - re(T::one())).norm(),
        weighted_sum(alphas, &cs, 3, 0),
        weighted_sum(alphas, &cs, 5, 0),
        weighted_sum(alphas, &cs, 3, 1),
        weighted_sum(alphas, &cs, 3, 2),
        weighted_sum(alphas, &cs, 3, 3),
        weighted_sum(alphas, &cs, 5, 1),
    ];
    let residuals: BTreeMap<_, _> = RESIDUAL_NAMES
        .iter()
        .copied()
        .zip(values.iter().map(|v| v.as_f64()))
        .collect();
    let max_residual = residuals.values().copied().fold(0.0, f64::max);
    let below = |names: &[&str]| names.iter().all(|n| residuals[n] < tol);
    let passes_at = if below(&RESIDUAL_NAMES) {
        6
    } else if below(ORDER3) {
        3
    } else if below(ORDER1) {
        1
    } else {
        0
    };
    OrderReport {
        label: label.to_string(),
        residuals,
        max_residual,
        passes_at,
        tolerance: tol,
    }
}

/// Indices (0-based) of a negative `a` and a negative `b` coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativityWitness {
    pub a_index: usize,
    pub b_index: usize,
}

/// For real chi-form coefficients with `Σα^3 = 0`, finds a negative `a_k` and
/// a negative `b_l` of the equivalent two-flow scheme.
///
/// Since `Σ_j (α_{2j−1}^3 + α_{2j}^3) = 0` some pair has a negative cube sum,
/// hence a negative sum; likewise for the pairs `(α_{2j}, α_{2j+1})` with
/// `α_0 = α_{2s+1} = 0`.
pub fn real_negativity_witness<T: Real>(alphas: &[T]) -> Result<NegativityWitness> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("no coefficients".into()));
    }
    let cubes = alphas.iter().fold(T::zero(), |acc, a| acc + a.powi(3));
    if cubes.abs() >= T::tol(1e-12) {
        return Err(Error::CubeConditionViolated {
            residual: cubes.as_f64(),
        });
    }
    let chi: Vec<_> = alphas.iter().map(|a| re(*a)).collect();
    let (a, b) = ab_arrays_from_chi(&chi);
    let first_negative = |xs: &[Complex<T>]| xs.iter().position(|z| z.re < T::zero());
    match (first_negative(&a), first_negative(&b)) {
        (Some(a_index), Some(b_index)) => Ok(NegativityWitness { a_index, b_index }),
        _ => Err(Error::NoNegativeWitness(format!(
            "a = {:?}, b = {:?}",
            a.iter().map(|z| z.re.as_f64()).collect::<Vec<_>>(),
            b.iter().map(|z| z.re.as_f64()).collect::<Vec<_>>()
        ))),
    }
}

/// Complex-input variant of [`real_negativity_witness`]; rejects
/// coefficients with a non-negligible imaginary part.
pub fn real_negativity_witness_complex<T: Real>(
    alphas: &[Complex<T>],
) -> Result<NegativityWitness> {
    let max_im = alphas.iter().fold(T::zero(), |m, z| m.max(z.im.abs()));
    if max_im > T::tol(1e-14) {
        return Err(Error::NotReal {
            max_im: max_im.as_f64(),
        });
    }
    let reals: Vec<T> = alphas.iter().map(|z| z.re).collect();
    real_negativity_witness(&reals)
}
