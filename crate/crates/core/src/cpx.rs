//! Exact complex rationals.
//!
//! [`CRat`] is the coefficient field for every symbolic stage: real and
//! imaginary parts are arbitrary-precision rationals kept in lowest terms, so
//! equality is structural and no operation ever rounds.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im*i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num / den` as a real value. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    /// Exact rational value of a finite double (every double is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::real)
    }

    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(CRat {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(CRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CRat::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Nearest double for each part. Out-of-range parts become infinite.
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Lexicographic order on (real part, imaginary part); the fixed total
    /// order used whenever roots or branches have to be sorted.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// True when the value equals `1` or `-1` up to sign, used by printers.
    pub(crate) fn is_unit_real(&self) -> bool {
        self.is_real() && self.re.abs().is_one()
    }
}

/// Rational to nearest double. `BigRational::to_f64` shifts numerator and
/// denominator down to 64-bit mantissas before dividing, so ratios of huge
/// integers (e.g. `40!/39!`) convert correctly even when the integers do not fit.
pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    match r.to_f64() {
        Some(v) => v,
        None => {
            if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

impl Zero for CRat {
    fn zero() -> Self {
        CRat::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CRat {
    fn one() -> Self {
        CRat::from_int(1)
    }
}

impl From<i64> for CRat {
    fn from(n: i64) -> Self {
        CRat::from_int(n)
    }
}

impl From<BigRational> for CRat {
    fn from(r: BigRational) -> Self {
        CRat::real(r)
    }
}

impl Ord for CRat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for CRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        match (self.is_real(), rhs.is_real()) {
            (true, true) => CRat::real(&self.re * &rhs.re),
            (true, false) => CRat {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => CRat {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => CRat {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl<'a> Div<&'a CRat> for &'a CRat {
    type Output = CRat;
    /// Panics on division by zero, like `BigRational`.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CRat) -> CRat {
        let inv = rhs.checked_inv().expect("division of CRat by zero");
        self * &inv
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CRat> for CRat {
            type Output = CRat;
            fn $m(self, rhs: CRat) -> CRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CRat> for CRat {
            type Output = CRat;
            fn $m(self, rhs: &CRat) -> CRat {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CRat> for &'a CRat {
            type Output = CRat;
            fn $m(self, rhs: CRat) -> CRat {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&CRat> for CRat {
    fn add_assign(&mut self, rhs: &CRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for CRat {
    fn add_assign(&mut self, rhs: CRat) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&CRat> for CRat {
    fn sub_assign(&mut self, rhs: &CRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&CRat> for CRat {
    fn mul_assign(&mut self, rhs: &CRat) {
        *self = &*self * rhs;
    }
}

impl Sum for CRat {
    fn sum<I: Iterator<Item = CRat>>(iter: I) -> CRat {
        iter.fold(CRat::zero(), |a, b| a + b)
    }
}

impl Product for CRat {
    fn product<I: Iterator<Item = CRat>>(iter: I) -> CRat {
        iter.fold(CRat::one(), |a, b| a * b)
    }
}

fn fmt_rat(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Prints in the expression grammar accepted by the parser: `3/4`, `-2*i`,
/// `1/2+3/4*i`.
impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rat(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rat(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if (-&self.im).is_one() {
            write!(f, "-i")
        } else {
            fmt_rat(&self.im, f)?;
            write!(f, "*i")
        }
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
