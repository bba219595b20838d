use num_complex::Complex64;
use num_traits::{One, Zero};

use super::sparse::{binomial_row, write_power, Monomial, SparsePoly};
use super::{FloatPoly, PolyError, UniPoly};
use crate::cpx::CRat;

/// Exponents of `x^x * α^a`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BiExp {
    pub x: u32,
    pub a: u32,
}

impl BiExp {
    pub const fn new(x: u32, a: u32) -> Self {
        BiExp { x, a }
    }
}

impl Monomial for BiExp {
    fn one() -> Self {
        BiExp::default()
    }
    fn mul(&self, o: &Self) -> Self {
        BiExp::new(self.x + o.x, self.a + o.a)
    }
    fn is_one(&self) -> bool {
        *self == BiExp::default()
    }
    fn write_factors(&self, out: &mut String) {
        write_power(out, "x", self.x);
        write_power(out, "a", self.a);
    }
}

/// Polynomial in `x` and the infinitesimal `α` (printed as `a`).
pub type BiPoly = SparsePoly<BiExp>;

impl SparsePoly<BiExp> {
    pub fn var_x() -> Self {
        Self::term(BiExp::new(1, 0), CRat::one())
    }

    pub fn var_alpha() -> Self {
        Self::term(BiExp::new(0, 1), CRat::one())
    }

    /// Embeds `f(x)` with no `α` dependence.
    pub fn from_uni(f: &UniPoly) -> Self {
        Self::from_terms(
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (BiExp::new(k as u32, 0), c.clone())),
        )
    }

    /// `f(x + α)` expanded binomially.
    pub fn uni_at_x_plus_alpha(f: &UniPoly) -> Self {
        let mut out = Self::zero();
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k as u32;
            for (j, b) in binomial_row(k).into_iter().enumerate() {
                out.add_term(BiExp::new(k - j as u32, j as u32), c * &b);
            }
        }
        out
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms().map(|(k, _)| k.x).max()
    }

    pub fn deg_alpha(&self) -> Option<u32> {
        self.terms().map(|(k, _)| k.a).max()
    }

    /// Divides by `α`. Every term must carry at least one factor of `α`.
    pub fn div_alpha_exact(&self) -> Result<Self, PolyError> {
        if let Some((k, c)) = self.terms().find(|(k, _)| k.a == 0) {
            return Err(PolyError::NotDivisibleByAlpha {
                monomial: Self::term(*k, c.clone()).to_string(),
            });
        }
        Ok(self.map_keys(|k| BiExp::new(k.x, k.a - 1)))
    }

    /// The `α`-free part `P(x)`: the standard part of the residual at finite `x`.
    pub fn at_alpha_zero(&self) -> UniPoly {
        let deg = self
            .terms()
            .filter(|(k, _)| k.a == 0)
            .map(|(k, _)| k.x as usize)
            .max();
        let Some(deg) = deg else {
            return UniPoly::zero();
        };
        let mut coeffs = vec![CRat::zero(); deg + 1];
        for (k, c) in self.terms().filter(|(k, _)| k.a == 0) {
            coeffs[k.x as usize] = c.clone();
        }
        UniPoly::new(coeffs)
    }

    /// Splits `self = P(x) + α·G(x, α)`.
    pub fn split_alpha(&self) -> (UniPoly, BiPoly) {
        let p = self.at_alpha_zero();
        let g = self
            .retain(|k| k.a > 0)
            .div_alpha_exact()
            .expect("terms with positive α-degree are divisible");
        (p, g)
    }

    /// Replaces `α` by a positive real and collects the result in `x`.
    ///
    /// Coefficients are rounded to the nearest double first; the `α` powers
    /// are then evaluated and accumulated in double precision.
    pub fn substitute_alpha(&self, alpha_star: f64) -> Result<FloatPoly, PolyError> {
        if !(alpha_star > 0.0 && alpha_star.is_finite()) {
            return Err(PolyError::InvalidAlpha(alpha_star));
        }
        let Some(deg) = self.deg_x() else {
            return Ok(FloatPoly::zero());
        };
        let mut out = vec![Complex64::zero(); deg as usize + 1];
        for (k, c) in self.terms() {
            let v = c.to_complex64();
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(PolyError::Overflow {
                    monomial: Self::term(*k, c.clone()).to_string(),
                });
            }
            out[k.x as usize] += v * alpha_star.powi(k.a as i32);
        }
        Ok(FloatPoly::new(out))
    }

    /// Exact value at `(x, α)`.
    pub fn eval(&self, x: &CRat, alpha: &CRat) -> CRat {
        self.terms()
            .map(|(k, c)| c * &x.pow(k.x) * alpha.pow(k.a))
            .sum()
    }

    /// Substitutes `x -> x + x0`.
    pub fn shift_x(&self, x0: &CRat) -> Self {
        if x0.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            let row = binomial_row(k.x);
            for j in 0..=k.x {
                out.add_term(BiExp::new(j, k.a), c * &row[j as usize] * x0.pow(k.x - j));
            }
        }
        out
    }
}
