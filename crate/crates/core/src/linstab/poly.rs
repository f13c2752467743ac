//! Dense polynomials in `h` with complex coefficients and 2×2 matrices of
//! them.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{re, Real};

/// `Σ coeffs[k] h^k`, trailing negligible coefficients trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(re(T::one()))
    }

    /// `c h^k`.
    pub fn monomial(c: Complex<T>, k: usize) -> Self {
        let mut coeffs = vec![re(T::zero()); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    fn trim(&mut self) {
        // below 1e-300 in f64; f32 trims at its smallest normal
        let floor = T::lit(1e-300).max(T::min_positive_value());
        while self.coeffs.last().is_some_and(|c| c.norm() < floor) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `h^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(|| re(T::zero()))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, h: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(re(T::zero()), |acc, c| acc * h + c)
    }

    pub fn eval_real(&self, h: T) -> Complex<T> {
        self.eval(re(h))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|x| *x * c).collect())
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.conj()).collect())
    }

    /// `p(−h)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, x)| if k % 2 == 1 { -*x } else { *x })
                .collect(),
        )
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Largest magnitude among coefficients of powers with the given
    /// parity (0 = even, 1 = odd), with the power attaining it.
    pub fn max_abs_with_parity(&self, parity: usize) -> (usize, T) {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == parity)
            .fold((parity, T::zero()), |(kb, mb), (k, c)| {
                if c.norm() > mb {
                    (k, c.norm())
                } else {
                    (kb, mb)
                }
            })
    }

    pub fn max_abs_re(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.re.abs()))
    }

    pub fn max_abs_im(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.im.abs()))
    }
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -*c).collect())
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![re(T::zero()); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        Poly::new(out)
    }
}

/// 2×2 matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix2<T: Real> {
    pub entries: [[Poly<T>; 2]; 2],
}

impl<T: Real> PolyMatrix2<T> {
    pub fn new(m11: Poly<T>, m12: Poly<T>, m21: Poly<T>, m22: Poly<T>) -> Self {
        PolyMatrix2 {
            entries: [[m11, m12], [m21, m22]],
        }
    }

    pub fn identity() -> Self {
        PolyMatrix2::new(Poly::one(), Poly::zero(), Poly::zero(), Poly::one())
    }

    /// `[[1, c h], [0, 1]]`.
    pub fn upper_shear(c: Complex<T>) -> Self {
        PolyMatrix2::new(Poly::one(), Poly::monomial(c, 1), Poly::zero(), Poly::one())
    }

    /// `[[1, 0], [−c h, 1]]`.
    pub fn lower_shear(c: Complex<T>) -> Self {
        PolyMatrix2::new(
            Poly::one(),
            Poly::zero(),
            Poly::monomial(-c, 1),
            Poly::one(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<T> {
        &self.entries[i][j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let e = |i: usize, j: usize| {
            &(&self.entries[i][0] * &rhs.entries[0][j])
                + &(&self.entries[i][1] * &rhs.entries[1][j])
        };
        PolyMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> Poly<T> {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    fn map(&self, f: impl Fn(&Poly<T>) -> Poly<T>) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        PolyMatrix2::new(f(a), f(b), f(c), f(d))
    }

    /// Entry-wise coefficient conjugation.
    pub fn conj(&self) -> Self {
        self.map(Poly::conj)
    }

    /// `K(−h)`.
    pub fn reflect(&self) -> Self {
        self.map(Poly::reflect)
    }

    pub fn eval(&self, h: Complex<T>) -> [[Complex<T>; 2]; 2] {
        let [[a, b], [c, d]] = &self.entries;
        [[a.eval(h), b.eval(h)], [c.eval(h), d.eval(h)]]
    }

    /// Largest coefficient deviation from the identity matrix.
    pub fn identity_defect(&self) -> T {
        let id = PolyMatrix2::identity();
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (&self.entries[i][j] - &id.entries[i][j]).max_abs())
            .fold(T::zero(), T::max)
    }
}
