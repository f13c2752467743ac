//! Composition and splitting schemes with complex coefficients.
//!
//! Two representations are used throughout:
//!
//! * [`CompositionScheme`]: step fractions `alphas` for a sequence of
//!   symmetric second-order basic steps (Strang/leapfrog). `alphas[0]` is
//!   applied first.
//! * [`TwoTermSplitScheme`]: the `a`/`b` coefficients of an alternating
//!   product of the two exact flows of a two-part split, `b[0]` applied first.
//!
//! Converting between them goes through the "chi-form" coefficients, the
//! fractions of a product of a first-order method and its adjoint
//! (see [`alpha_from_ab`] and [`ab_from_chi_alphas`]).

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, csum, is_finite, power_sum, re, Real};

/// Consistency tolerance applied on construction.
pub const CONSISTENCY_TOL: f64 = 1e-12;
/// Per-coefficient tolerance used when matching symmetry patterns.
pub const SYMMETRY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryClass {
    /// `alphas[s-1-i] == alphas[i]`.
    Symmetric,
    /// `alphas[s-1-i] == conj(alphas[i])` with at least one non-real entry.
    ConjugateSymmetric,
    NoSymmetry,
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::ConjugateSymmetric => "conjugate-symmetric",
            SymmetryClass::NoSymmetry => "none",
        };
        f.write_str(s)
    }
}

/// Sign choice for the third-order two-stage scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// First stage has positive imaginary part.
    Plus,
    /// First stage has negative imaginary part.
    Minus,
}

/// A composition of symmetric second-order basic steps with complex step
/// fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionScheme<T: Real> {
    alphas: Vec<Complex<T>>,
    declared_order: u32,
    label: String,
    symmetry: SymmetryClass,
}

impl<T: Real> CompositionScheme<T> {
    /// Builds a scheme, rejecting non-finite or inconsistent coefficients.
    /// The symmetry class is derived from the coefficients.
    pub fn new(
        label: impl Into<String>,
        alphas: Vec<Complex<T>>,
        declared_order: u32,
    ) -> Result<Self> {
        let label = label.into();
        if alphas.is_empty() {
            return Err(Error::InvalidArgument(format!("`{label}` has no stages")));
        }
        if declared_order < 1 {
            return Err(Error::InvalidArgument("declared order must be >= 1".into()));
        }
        check_finite(&label, &alphas)?;
        let residual = (csum(&alphas) - re(T::one())).norm();
        if residual >= T::tol(CONSISTENCY_TOL) {
            return Err(Error::Inconsistent {
                label,
                residual: residual.as_f64(),
            });
        }
        let symmetry = classify_symmetry(&alphas);
        Ok(CompositionScheme {
            alphas,
            declared_order,
            label,
            symmetry,
        })
    }

    /// The basic method itself: one stage with fraction 1.
    pub fn leapfrog() -> Self {
        CompositionScheme::new("S2", vec![re(T::one())], 2).expect("leapfrog is consistent")
    }

    pub fn alphas(&self) -> &[Complex<T>] {
        &self.alphas
    }

    pub fn stages(&self) -> usize {
        self.alphas.len()
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn symmetry(&self) -> SymmetryClass {
        self.symmetry
    }

    /// Same scheme with a different label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Stage order reversed (the adjoint for a composition of symmetric
    /// basic steps).
    pub fn reversed(&self) -> Self {
        let mut alphas = self.alphas.clone();
        alphas.reverse();
        let symmetry = classify_symmetry(&alphas);
        CompositionScheme {
            alphas,
            declared_order: self.declared_order,
            label: format!("{}*", self.label),
            symmetry,
        }
    }
}

/// Coefficients `a` (length s) and `b` (length s + 1) of an alternating
/// product of the two flows of a two-part split.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTermSplitScheme<T: Real> {
    a: Vec<Complex<T>>,
    b: Vec<Complex<T>>,
    declared_order: u32,
    label: String,
}

impl<T: Real> TwoTermSplitScheme<T> {
    pub fn new(
        label: impl Into<String>,
        a: Vec<Complex<T>>,
        b: Vec<Complex<T>>,
        declared_order: u32,
    ) -> Result<Self> {
        let label = label.into();
        if a.is_empty() || b.len() != a.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "`{label}` needs s >= 1 `a` and s + 1 `b` coefficients, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        check_finite(&label, &a)?;
        check_finite(&label, &b)?;
        let tol = T::tol(CONSISTENCY_TOL);
        for sum in [csum(&a), csum(&b)] {
            let residual = (sum - re(T::one())).norm();
            if residual >= tol {
                return Err(Error::Inconsistent {
                    label,
                    residual: residual.as_f64(),
                });
            }
        }
        Ok(TwoTermSplitScheme {
            a,
            b,
            declared_order,
            label,
        })
    }

    /// The Strang splitting: a = [1], b = [1/2, 1/2].
    pub fn strang() -> Self {
        let half = re(T::lit(0.5));
        TwoTermSplitScheme::new("Strang", vec![re(T::one())], vec![half, half], 2)
            .expect("Strang is consistent")
    }

    pub fn a(&self) -> &[Complex<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Complex<T>] {
        &self.b
    }

    pub fn stages(&self) -> usize {
        self.a.len()
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn check_finite<T: Real>(label: &str, xs: &[Complex<T>]) -> Result<()> {
    match xs.iter().position(|z| !is_finite(z)) {
        Some(index) => Err(Error::NonFiniteCoefficient {
            label: label.to_string(),
            index,
        }),
        None => Ok(()),
    }
}

/// Matches the coefficient pattern against the two symmetry classes.
///
/// A real palindromic scheme is `Symmetric`; a scheme can only be both
/// palindromic and conjugate-palindromic if all its entries are real.
pub fn classify_symmetry<T: Real>(alphas: &[Complex<T>]) -> SymmetryClass {
    let tol = T::tol(SYMMETRY_TOL);
    let s = alphas.len();
    let mirrored = |f: &dyn Fn(Complex<T>) -> Complex<T>| {
        (0..s).all(|i| (alphas[s - 1 - i] - f(alphas[i])).norm() <= tol)
    };
    if mirrored(&|z| z) {
        SymmetryClass::Symmetric
    } else if mirrored(&|z| z.conj()) && alphas.iter().any(|z| z.im.abs() > tol) {
        SymmetryClass::ConjugateSymmetric
    } else {
        SymmetryClass::NoSymmetry
    }
}

/// The two-stage third-order composition. Both stages are `1/2 ± i√3/6`;
/// `Branch::Plus` applies the stage with positive imaginary part first.
pub fn third_order_two_term<T: Real>(branch: Branch) -> CompositionScheme<T> {
    let half = T::lit(0.5);
    let im = T::lit(3.0).sqrt() / T::lit(6.0);
    let first = match branch {
        Branch::Plus => c(half, im),
        Branch::Minus => c(half, -im),
    };
    let label = match branch {
        Branch::Plus => "S23",
        Branch::Minus => "S23-",
    };
    CompositionScheme::new(label, vec![first, first.conj()], 3).expect("third order is consistent")
}

/// Symmetric three-stage fourth-order composition `[α, β, α]` with
/// `α = 1 / (2 − 2^{1/3} e^{2ikπ/3})`, `β = 1 − 2α`.
///
/// `k = 0` is the real triple jump (negative middle stage); `k = 1, 2` give
/// conjugate pairs with positive real parts.
pub fn fourth_order_three_term<T: Real>(k: u32) -> Result<CompositionScheme<T>> {
    if k > 2 {
        return Err(Error::InvalidArgument(format!(
            "k must be 0, 1 or 2, got {k}"
        )));
    }
    let cbrt2 = T::lit(2.0).cbrt();
    let angle = T::lit(2.0) * T::PI() * T::count(k as usize) / T::lit(3.0);
    let mut alpha = (re(T::lit(2.0)) - Complex::from_polar(cbrt2, angle)).inv();
    if k == 0 {
        alpha.im = T::zero();
    }
    let beta = re(T::one()) - alpha * T::lit(2.0);
    CompositionScheme::new(format!("S34(k={k})"), vec![alpha, beta, alpha], 4)
}

/// Fourth-order symmetrization of the third-order scheme:
/// `[α/2, β/2, β/2, α/2]` with `α = 1/2 − i√3/6`, `β = 1/2 + i√3/6`.
pub fn fourth_order_palindromic_from_third<T: Real>() -> CompositionScheme<T> {
    let third = third_order_two_term::<T>(Branch::Minus);
    let half = T::lit(0.5);
    let (alpha, beta) = (third.alphas[0] * half, third.alphas[1] * half);
    CompositionScheme::new("S44", vec![alpha, beta, beta, alpha], 4)
        .expect("palindromic fourth order is consistent")
}

/// Inclusive range of the branch index `l` for the two-stage order raise
/// from order `n`.
pub fn two_term_branch_range(n: u32) -> (i32, i32) {
    let n = n as i32;
    if n % 2 == 0 {
        (-n / 2, n / 2 - 1)
    } else {
        (-(n + 1) / 2, (n - 1) / 2)
    }
}

/// Raises the order of `base` by one: the result applies `base` with step
/// `βh`, then with `αh`, where `α + β = 1` and `α^{n+1} + β^{n+1} = 0`:
///
/// `α = 1/2 + i sin θ / (2 + 2 cos θ)`, `θ = (2l + 1)π / (n + 1)`.
///
/// `l = 0` gives the root with the smallest phase.
pub fn raise_order_two_term<T: Real>(
    base: &CompositionScheme<T>,
    n: u32,
    l: i32,
) -> Result<CompositionScheme<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("order n must be >= 1".into()));
    }
    if base.declared_order != n {
        return Err(Error::OrderMismatch {
            expected: n,
            actual: base.declared_order,
        });
    }
    let (lo, hi) = two_term_branch_range(n);
    if l < lo || l > hi {
        return Err(Error::BranchOutOfRange { n, l, lo, hi });
    }
    let theta = T::lit(f64::from(2 * l + 1)) * T::PI() / T::count(n as usize + 1);
    let alpha = c(
        T::lit(0.5),
        theta.sin() / (T::lit(2.0) + T::lit(2.0) * theta.cos()),
    );
    let beta = re(T::one()) - alpha;
    let alphas = scaled(&base.alphas, beta)
        .chain(scaled(&base.alphas, alpha))
        .collect();
    CompositionScheme::new(format!("{}>2t{}", base.label, n + 1), alphas, n + 1)
}

/// All roots `α_k = 1 / (2 + 2^{1/(n+1)} e^{iπ(2k+1)/(n+1)})`, k = 0..=n, of
/// `2α + β = 1`, `2α^{n+1} + β^{n+1} = 0`.
pub fn three_term_roots<T: Real>(n: u32) -> Vec<Complex<T>> {
    let np1 = T::count(n as usize + 1);
    let radius = T::lit(2.0).powf(np1.recip());
    (0..=n)
        .map(|k| {
            let angle = T::PI() * T::count(2 * k as usize + 1) / np1;
            (re(T::lit(2.0)) + Complex::from_polar(radius, angle)).inv()
        })
        .collect()
}

/// Roots with `Re α > 0` and `Re(1 − 2α) > 0`, ordered by increasing
/// `|arg α|`; ties go to positive `Im α`.
pub fn three_term_candidates<T: Real>(n: u32) -> Vec<Complex<T>> {
    let tie = T::tol(1e-12);
    let mut roots: Vec<_> = three_term_roots::<T>(n)
        .into_iter()
        .filter(|a| {
            let beta = re(T::one()) - *a * T::lit(2.0);
            a.re > T::zero() && beta.re > T::zero()
        })
        .collect();
    roots.sort_by(|x, y| {
        let (px, py) = (x.arg().abs(), y.arg().abs());
        if (px - py).abs() <= tie {
            y.im.partial_cmp(&x.im).unwrap_or(std::cmp::Ordering::Equal)
        } else {
            px.partial_cmp(&py).unwrap_or(std::cmp::Ordering::Equal)
        }
    });
    roots
}

/// Raises the order of a symmetric scheme of even order `n` by two with the
/// symmetric composition `[αh, βh, αh]` of `base`, `2α + β = 1`,
/// `2α^{n+1} + β^{n+1} = 0`.
///
/// The root of smallest phase is used among those for which every
/// resulting coefficient has positive real part.
pub fn raise_order_three_term<T: Real>(
    base: &CompositionScheme<T>,
    n: u32,
) -> Result<CompositionScheme<T>> {
    if base.declared_order != n {
        return Err(Error::OrderMismatch {
            expected: n,
            actual: base.declared_order,
        });
    }
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "three-term raise needs an even base order, got {n}"
        )));
    }
    if base.symmetry != SymmetryClass::Symmetric {
        return Err(Error::InvalidArgument(format!(
            "three-term raise needs a symmetric base, `{}` is {}",
            base.label, base.symmetry
        )));
    }
    raise_order_three_term_inner(base, n)
        .map(|s| s.with_label(format!("{}>3t{}", base.label, n + 2)))
        .ok_or_else(|| Error::NoAdmissibleRoot {
            from: n,
            to: n + 2,
            admissible: three_term_chain_orders::<T>(),
        })
}

/// Orders reachable by repeated three-term raises from leapfrog while all
/// coefficients keep a positive real part.
pub fn three_term_chain_orders<T: Real>() -> Vec<u32> {
    let mut orders = Vec::new();
    let mut scheme = CompositionScheme::<T>::leapfrog();
    // each raise triples the stage count; stop well before it gets silly
    while orders.len() < 8 {
        let n = scheme.declared_order;
        match raise_order_three_term_inner(&scheme, n) {
            Some(next) => {
                orders.push(next.declared_order);
                scheme = next;
            }
            None => break,
        }
    }
    orders
}

fn raise_order_three_term_inner<T: Real>(
    base: &CompositionScheme<T>,
    n: u32,
) -> Option<CompositionScheme<T>> {
    three_term_candidates::<T>(n).into_iter().find_map(|alpha| {
        let beta = re(T::one()) - alpha * T::lit(2.0);
        let alphas: Vec<_> = scaled(&base.alphas, alpha)
            .chain(scaled(&base.alphas, beta))
            .chain(scaled(&base.alphas, alpha))
            .collect();
        if alphas.iter().all(|z| z.re > T::zero()) {
            CompositionScheme::new(base.label.clone(), alphas, n + 2).ok()
        } else {
            None
        }
    })
}

fn scaled<T: Real>(xs: &[Complex<T>], factor: Complex<T>) -> impl Iterator<Item = Complex<T>> + '_ {
    xs.iter().map(move |x| *x * factor)
}

/// Expands every basic step into `b(α/2) a(α) b(α/2)` and merges adjacent
/// `b` flows.
pub fn ab_from_alpha<T: Real>(scheme: &CompositionScheme<T>) -> TwoTermSplitScheme<T> {
    let half = T::lit(0.5);
    let s = scheme.alphas.len();
    let a = scheme.alphas.clone();
    let mut b = Vec::with_capacity(s + 1);
    b.push(scheme.alphas[0] * half);
    for w in scheme.alphas.windows(2) {
        b.push((w[0] + w[1]) * half);
    }
    b.push(scheme.alphas[s - 1] * half);
    TwoTermSplitScheme {
        a,
        b,
        declared_order: scheme.declared_order,
        label: scheme.label.clone(),
    }
}

/// Chi-form coefficients `α_1 … α_{2s}` of an a/b scheme:
///
/// `α_1 = b_1`, `α_{2j} = Σ_{k≤j} (a_k − b_k)`, `α_{2j+1} = b_1 + Σ_{k≤j} (b_{k+1} − a_k)`.
///
/// The relation needs `Σa = Σb`, equivalently a vanishing `α_{2s+1}`.
pub fn alpha_from_ab<T: Real>(scheme: &TwoTermSplitScheme<T>) -> Result<Vec<Complex<T>>> {
    let difference = (csum(&scheme.a) - csum(&scheme.b)).norm();
    if difference >= T::tol(CONSISTENCY_TOL) {
        return Err(Error::UnequalSums {
            difference: difference.as_f64(),
        });
    }
    let s = scheme.a.len();
    let mut out = Vec::with_capacity(2 * s);
    out.push(scheme.b[0]);
    let mut even = re(T::zero());
    let mut odd = scheme.b[0];
    for j in 1..=s {
        even += scheme.a[j - 1] - scheme.b[j - 1];
        out.push(even);
        odd += scheme.b[j] - scheme.a[j - 1];
        if j < s {
            out.push(odd);
        }
    }
    // `odd` now holds α_{2s+1}, which must vanish.
    debug_assert!(odd.norm() < T::tol(1e-10));
    Ok(out)
}

/// Inverse of [`alpha_from_ab`]: `a_j = α_{2j−1} + α_{2j}`,
/// `b_{j+1} = α_{2j} + α_{2j+1}`, `b_1 = α_1`, with `α_{2s+1} = 0`. An odd
/// number of chi-form coefficients is padded with a trailing zero.
pub fn ab_from_chi_alphas<T: Real>(
    label: impl Into<String>,
    alphas: &[Complex<T>],
    declared_order: u32,
) -> Result<TwoTermSplitScheme<T>> {
    let (a, b) = ab_arrays_from_chi(alphas);
    TwoTermSplitScheme::new(label, a, b, declared_order)
}

pub(crate) fn ab_arrays_from_chi<T: Real>(
    alphas: &[Complex<T>],
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let mut padded = alphas.to_vec();
    if padded.len() % 2 == 1 {
        padded.push(re(T::zero()));
    }
    let s = padded.len() / 2;
    let at = |i: usize| -> Complex<T> {
        // 1-based, zero outside 1..=2s
        if i == 0 || i > 2 * s {
            re(T::zero())
        } else {
            padded[i - 1]
        }
    };
    let a = (1..=s).map(|j| at(2 * j - 1) + at(2 * j)).collect();
    let b = (0..=s).map(|j| at(2 * j) + at(2 * j + 1)).collect();
    (a, b)
}

/// Recovers the composition form of an a/b scheme whose chi-form
/// coefficients come in equal pairs (`α_{2j−1} = α_{2j}`), i.e. one that is a
/// composition of Strang steps.
pub fn composition_from_ab<T: Real>(
    scheme: &TwoTermSplitScheme<T>,
) -> Result<CompositionScheme<T>> {
    let chi = alpha_from_ab(scheme)?;
    let tol = T::tol(CONSISTENCY_TOL);
    let mut alphas = Vec::with_capacity(chi.len() / 2);
    for (j, pair) in chi.chunks(2).enumerate() {
        let gap = (pair[0] - pair[1]).norm();
        if gap > tol {
            return Err(Error::InvalidArgument(format!(
                "`{}` is not a composition of Strang steps: chi-form pair {} differs by {:e}",
                scheme.label,
                j + 1,
                gap.as_f64()
            )));
        }
        alphas.push(pair[0] + pair[1]);
    }
    CompositionScheme::new(scheme.label.clone(), alphas, scheme.declared_order)
}

/// `|Σ α^k|` for the given power, a convenience for residual checks.
pub fn power_sum_residual<T: Real>(alphas: &[Complex<T>], k: i32) -> T {
    power_sum(alphas, k).norm()
}

// Sixth-order 7-stage coefficients, first four stages as printed.
const S76_HEAD: [(&str, &str); 4] = [
    ("0.116900037554661284389", "0.043428254616060341762"),
    ("0.12955910128208826275", "-0.12398961218809259330"),
    ("0.18653249281213381780", "0.00310743071007267534"),
    ("0.13401673670223327014", "0.15490785372391915239"),
];

const S7C6_HEAD: [(&str, &str); 4] = [
    ("0.133741778914683628452", "-0.028839028371025553995"),
    ("0.12134019583938803504", "0.11585180844272788007"),
    ("0.13489797942731665044", "-0.12906241362827633477"),
    ("0.22004009163722337213", "0"),
];

fn parse_head<T: Real>(head: &[(&str, &str); 4]) -> Vec<Complex<T>> {
    let parse = |s: &str| -> T { T::lit(s.parse::<f64>().expect("table coefficient parses")) };
    head.iter().map(|(r, i)| c(parse(r), parse(i))).collect()
}

fn complete_seven<T: Real>(head: Vec<Complex<T>>, conjugate: bool) -> Vec<Complex<T>> {
    let mut alphas = head.clone();
    for z in head[..3].iter().rev() {
        alphas.push(if conjugate { z.conj() } else { *z });
    }
    alphas
}

/// Names accepted by [`by_name`], in catalog order.
pub const CATALOG_NAMES: [&str; 5] = ["s23", "s34", "s44", "s76", "s7c6"];

/// Symmetric 7-stage sixth-order method.
pub fn s76<T: Real>() -> CompositionScheme<T> {
    let alphas = complete_seven(parse_head::<T>(&S76_HEAD), false);
    CompositionScheme::new("S76", alphas, 6).expect("S76 is consistent")
}

/// 7-stage sixth-order method conjugate to a symmetric one.
pub fn s7c6<T: Real>() -> CompositionScheme<T> {
    let alphas = complete_seven(parse_head::<T>(&S7C6_HEAD), true);
    CompositionScheme::new("S7c6", alphas, 6).expect("S7c6 is consistent")
}

/// Built-in schemes: S23, S34, S44, S76, S7c6.
pub fn catalog<T: Real>() -> Vec<CompositionScheme<T>> {
    CATALOG_NAMES
        .iter()
        .map(|n| by_name(n).expect("catalog names resolve"))
        .collect()
}

/// Looks up a catalog scheme by (case-insensitive) name.
pub fn by_name<T: Real>(name: &str) -> Result<CompositionScheme<T>> {
    let scheme = match name.to_ascii_lowercase().as_str() {
        "s23" => third_order_two_term(Branch::Plus),
        "s34" => fourth_order_three_term(1)?.with_label("S34"),
        "s44" => fourth_order_palindromic_from_third(),
        "s76" => s76(),
        "s7c6" | "s7*6" => s7c6(),
        "s2" | "leapfrog" | "strang" => CompositionScheme::leapfrog(),
        _ => {
            return Err(Error::UnknownName {
                kind: "method",
                name: name.to_string(),
                available: CATALOG_NAMES.join(", "),
            })
        }
    };
    Ok(scheme)
}
