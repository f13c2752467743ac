//! Linear stability of two-flow schemes on the harmonic oscillator.
//!
//! With the drift `A = [[0, 1], [0, 0]]` and kick `B = [[0, 0], [-1, 0]]`
//! one step of an a/b scheme is the polynomial matrix
//!
//! ```text
//! K(h) = e^{b_{s+1} h B} e^{a_s h A} ⋯ e^{a_1 h A} e^{b_1 h B}
//!      = [[ p + d,  q + e ],
//!         [ e − q,  p − d ]]
//! ```
//!
//! with `p`, `d` even and `q`, `e` odd in `h`, and `det K = 1`. The half
//! trace `p(h)` decides stability: the eigenvalues are `p ± √(p² − 1)`.

mod poly;

use std::io::{self, Write};

use num_complex::Complex;
use serde::Serialize;

pub use poly::{Poly, PolyMatrix2};

use crate::coeffs::TwoTermSplitScheme;
use crate::engine::fmt17;
use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// Coefficient-wise tolerance for the structural identities of `K(h)`.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// `|Im p(h)|` below this counts as real.
pub const REALITY_TOL: f64 = 1e-12;
/// Half-width of the band around `|p| = 1` treated as the boundary case.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Exact polynomial one-step matrix of `scheme` on the oscillator.
pub fn build_k<T: Real>(scheme: &TwoTermSplitScheme<T>) -> PolyMatrix2<T> {
    let (a, b) = (scheme.a(), scheme.b());
    let mut k = PolyMatrix2::lower_shear(b[0]);
    for (ai, bi) in a.iter().zip(&b[1..]) {
        k = PolyMatrix2::upper_shear(*ai).mul(&k);
        k = PolyMatrix2::lower_shear(*bi).mul(&k);
    }
    k
}

/// Largest coefficient of `det K − 1`.
pub fn determinant_defect<T: Real>(k: &PolyMatrix2<T>) -> T {
    (&k.det() - &Poly::one()).max_abs()
}

/// The four structural polynomials of `K(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pqde<T: Real> {
    pub p: Poly<T>,
    pub q: Poly<T>,
    pub d: Poly<T>,
    pub e: Poly<T>,
}

/// Splits `K` into `p = (K11 + K22)/2`, `d = (K11 − K22)/2`,
/// `q = (K12 − K21)/2`, `e = (K12 + K21)/2`, checking that `p`, `d` are even
/// and `q`, `e` odd.
pub fn pqde<T: Real>(k: &PolyMatrix2<T>) -> Result<Pqde<T>> {
    let half = re(T::lit(0.5));
    let [[k11, k12], [k21, k22]] = &k.entries;
    let out = Pqde {
        p: (k11 + k22).scale(half),
        d: (k11 - k22).scale(half),
        q: (k12 - k21).scale(half),
        e: (k12 + k21).scale(half),
    };
    let tol = T::tol(STRUCTURE_TOL);
    for (which, poly, wrong_parity) in [
        ("p", &out.p, 1),
        ("d", &out.d, 1),
        ("q", &out.q, 0),
        ("e", &out.e, 0),
    ] {
        let (power, magnitude) = poly.max_abs_with_parity(wrong_parity);
        if magnitude > tol {
            return Err(Error::Parity {
                which,
                power,
                magnitude: magnitude.as_f64(),
            });
        }
    }
    Ok(out)
}

/// `K(h) · conj(K(−h)) = I` as a polynomial identity, i.e.
/// `K(h)^{-1} = K(−h)^*`.
pub fn adjoint_symmetry_check<T: Real>(scheme: &TwoTermSplitScheme<T>) -> bool {
    let k = build_k(scheme);
    k.mul(&k.reflect().conj()).identity_defect() <= T::tol(STRUCTURE_TOL)
}

/// `K(h) · K(−h) = I` as a polynomial identity (time symmetry).
pub fn symmetric_inverse_check<T: Real>(scheme: &TwoTermSplitScheme<T>) -> bool {
    let k = build_k(scheme);
    k.mul(&k.reflect()).identity_defect() <= T::tol(STRUCTURE_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    Stable,
    WeaklyUnstable,
    Unstable,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::WeaklyUnstable => "weakly-unstable",
            Stability::Unstable => "unstable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict<T: Real> {
    pub stability: Stability,
    pub h: T,
    pub p: Complex<T>,
    pub max_eigen_modulus: T,
    /// `arccos p(h)` when `p(h)` is real and strictly inside (−1, 1).
    pub phase: Option<T>,
}

/// Polynomial form of a scheme's oscillator matrix, reusable across step
/// sizes.
#[derive(Debug, Clone)]
pub struct StabilityAnalysis<T: Real> {
    label: String,
    k: PolyMatrix2<T>,
    parts: Pqde<T>,
}

impl<T: Real> StabilityAnalysis<T> {
    pub fn new(scheme: &TwoTermSplitScheme<T>) -> Result<Self> {
        let k = build_k(scheme);
        let parts = pqde(&k)?;
        Ok(StabilityAnalysis {
            label: scheme.label().to_string(),
            k,
            parts,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn k(&self) -> &PolyMatrix2<T> {
        &self.k
    }

    pub fn pqde(&self) -> &Pqde<T> {
        &self.parts
    }

    /// Numeric `K(h)`.
    pub fn k_at(&self, h: T) -> [[Complex<T>; 2]; 2] {
        self.k.eval(re(h))
    }

    /// Moduli of `p ± √(p² − 1)`, the eigenvalues of `K(h)`.
    pub fn max_eigen_modulus(&self, h: T) -> T {
        let m = self.k_at(h);
        let p = (m[0][0] + m[1][1]) * T::lit(0.5);
        let root = (p * p - T::one()).sqrt();
        (p + root).norm().max((p - root).norm())
    }

    pub fn classify(&self, h: T) -> Result<StabilityVerdict<T>> {
        if !(h > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "h must be positive, got {h}"
            )));
        }
        let p = self.parts.p.eval_real(h);
        let max_eigen_modulus = self.max_eigen_modulus(h);
        let real = p.im.abs() < T::tol(REALITY_TOL);
        let band = T::tol(BOUNDARY_BAND);
        let on_boundary = (p.re.abs() - T::one()).abs() <= band;
        let stability = if !real {
            Stability::Unstable
        } else if on_boundary {
            // p = ±1: stable only if K(h) = ±I, otherwise a Jordan block
            let tol = T::tol(STRUCTURE_TOL);
            let off = [&self.parts.q, &self.parts.d, &self.parts.e]
                .iter()
                .any(|poly| poly.eval_real(h).norm() > tol);
            if off {
                Stability::WeaklyUnstable
            } else {
                Stability::Stable
            }
        } else if p.re.abs() < T::one() {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        let phase =
            (stability == Stability::Stable && p.re.abs() < T::one() - band).then(|| p.re.acos());
        Ok(StabilityVerdict {
            stability,
            h,
            p,
            max_eigen_modulus,
            phase,
        })
    }

    /// `(φ, φ/h)` with `φ = arccos p(h)`, the numerical rotation angle per
    /// step and the effective frequency.
    pub fn phase(&self, h: T) -> Result<(T, T)> {
        let v = self.classify(h)?;
        v.phase.map(|phi| (phi, phi / h)).ok_or_else(|| {
            Error::PhaseUndefined(format!(
                "`{}` at h = {h}: {} with p = {}",
                self.label, v.stability, v.p
            ))
        })
    }

    /// Largest entry modulus of `K(h)^k` over `k = 1..=n`.
    pub fn max_power_norm(&self, h: T, n: usize) -> T {
        let m = self.k_at(h);
        let mut acc = m;
        let entry_max =
            |a: &[[Complex<T>; 2]; 2]| a.iter().flatten().fold(T::zero(), |mx, z| mx.max(z.norm()));
        let mut worst = entry_max(&acc);
        for _ in 1..n {
            acc = mul2(&m, &acc);
            worst = worst.max(entry_max(&acc));
            if !worst.is_finite() {
                break;
            }
        }
        worst
    }

    /// Classifies `samples` equally spaced step sizes in `[hmin, hmax]`.
    pub fn sweep(&self, hmin: T, hmax: T, samples: usize) -> Result<Vec<StabilityVerdict<T>>> {
        if samples == 0 || !(hmin > T::zero()) || hmax < hmin {
            return Err(Error::InvalidArgument(format!(
                "sweep needs 0 < hmin <= hmax and samples >= 1, got [{hmin}, {hmax}] x {samples}"
            )));
        }
        (0..samples)
            .map(|i| {
                let h = if samples == 1 {
                    hmin
                } else {
                    hmin + (hmax - hmin) * T::count(i) / T::count(samples - 1)
                };
                self.classify(h)
            })
            .collect()
    }
}

fn mul2<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Convenience wrapper around [`StabilityAnalysis::classify`].
pub fn classify<T: Real>(scheme: &TwoTermSplitScheme<T>, h: T) -> Result<StabilityVerdict<T>> {
    StabilityAnalysis::new(scheme)?.classify(h)
}

/// Convenience wrapper around [`StabilityAnalysis::phase`].
pub fn phase<T: Real>(scheme: &TwoTermSplitScheme<T>, h: T) -> Result<(T, T)> {
    StabilityAnalysis::new(scheme)?.phase(h)
}

/// Writes `h,re_p,im_p,max_eig_mod,verdict,phase,phase_over_h`; the phase
/// columns are `NaN` where the phase is undefined.
pub fn write_sweep_csv<T: Real, W: Write>(
    rows: &[StabilityVerdict<T>],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "h,re_p,im_p,max_eig_mod,verdict,phase,phase_over_h")?;
    for v in rows {
        let (phase, ratio) = match v.phase {
            Some(phi) => (fmt17(phi), fmt17(phi / v.h)),
            None => ("NaN".to_string(), "NaN".to_string()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(v.h),
            fmt17(v.p.re),
            fmt17(v.p.im),
            fmt17(v.max_eigen_modulus),
            v.stability,
            phase,
            ratio
        )?;
    }
    Ok(())
}
