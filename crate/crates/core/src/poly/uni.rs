use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::sparse::{binomial_row, write_terms};
use super::{BiPoly, FloatPoly, PolyError};
use crate::cpx::CRat;

/// Dense univariate polynomial in `x`; `coeffs[k]` multiplies `x^k`.
/// The highest stored coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<CRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<CRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRat) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: CRat) -> Self {
        let mut v = vec![CRat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(1, CRat::one())
    }

    pub fn coeffs(&self) -> &[CRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CRat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &CRat) -> CRat {
        let mut acc = CRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner in doubles over the per-coefficient rounded polynomial.
    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.to_float().eval(x)
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::new(self.coeffs.iter().map(CRat::to_complex64).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &CRat::from_int(k as i64))
                .collect(),
        )
    }

    /// `p(x + x0)`.
    pub fn shift_x(&self, x0: &CRat) -> Self {
        if x0.is_zero() || self.coeffs.len() < 2 {
            return self.clone();
        }
        let n = self.coeffs.len();
        let pw: Vec<CRat> = std::iter::successors(Some(CRat::one()), |p| Some(p * x0))
            .take(n)
            .collect();
        let mut out = vec![CRat::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = binomial_row(k as u32);
            for j in 0..=k {
                out[j] += c * &row[j] * &pw[k - j];
            }
        }
        Self::new(out)
    }

    /// `p(x / x0)`: coefficient `k` divided by `x0^k`.
    pub fn scale_x(&self, x0: &CRat) -> Result<Self, PolyError> {
        let inv = x0.checked_inv().ok_or(PolyError::ZeroScale)?;
        let mut pw = CRat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pw);
            pw = &pw * &inv;
        }
        Ok(Self::new(out))
    }

    pub fn to_bi(&self) -> BiPoly {
        BiPoly::from_uni(self)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![CRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Ascending powers, e.g. `1 + x + 1/2*x^2`; re-parses with `parse_recipe`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(self.to_bi().terms(), f)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
