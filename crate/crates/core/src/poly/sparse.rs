use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cpx::CRat;

/// Exponent vector of a sparse polynomial.
pub trait Monomial: Clone + Ord + Hash + fmt::Debug + Send + Sync {
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_one(&self) -> bool;
    /// Writes the factors (`x^2*a`), nothing for the unit monomial.
    fn write_factors(&self, out: &mut String);
}

/// Sparse polynomial over [`CRat`]. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly<K: Monomial> {
    terms: BTreeMap<K, CRat>,
}

impl<K: Monomial> Default for SparsePoly<K> {
    fn default() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Monomial> SparsePoly<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRat) -> Self {
        Self::term(K::one(), c)
    }

    pub fn term(k: K, c: CRat) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (K, CRat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&K, &CRat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, CRat)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, k: &K) -> CRat {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    /// Adds `c * k`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: K, c: CRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &CRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by a single monomial.
    pub fn shift_by(&self, k: &K) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(k), v.clone()))
                .collect(),
        }
    }

    pub fn map_keys<J: Monomial>(&self, f: impl Fn(&K) -> J) -> SparsePoly<J> {
        SparsePoly::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    pub fn retain(&self, keep: impl Fn(&K) -> bool) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(CRat::one());
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

    /// Product restricted to the monomials accepted by `keep`; cheaper than
    /// multiplying and filtering afterwards.
    pub fn mul_filtered(&self, other: &Self, keep: impl Fn(&K) -> bool) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let a = IntegerForm::new(self);
        let b = IntegerForm::new(other);
        let complex = a.complex || b.complex;
        let mut acc: HashMap<K, (BigInt, BigInt)> = HashMap::new();
        for (ka, ra, ia) in &a.terms {
            for (kb, rb, ib) in &b.terms {
                let k = ka.mul(kb);
                if !keep(&k) {
                    continue;
                }
                let e = acc
                    .entry(k)
                    .or_insert_with(|| (BigInt::zero(), BigInt::zero()));
                if complex {
                    e.0 += ra * rb - ia * ib;
                    e.1 += ra * ib + ia * rb;
                } else {
                    e.0 += ra * rb;
                }
            }
        }
        let den = &a.den * &b.den;
        SparsePoly {
            terms: acc
                .into_iter()
                .filter(|(_, (r, i))| !(r.is_zero() && i.is_zero()))
                .map(|(k, (r, i))| {
                    (
                        k,
                        CRat::new(
                            BigRational::new(r, den.clone()),
                            BigRational::new(i, den.clone()),
                        ),
                    )
                })
                .collect(),
        }
    }
}

/// Coefficients brought to a common denominator so that products accumulate
/// in Gaussian integers without a gcd per multiplication.
struct IntegerForm<K> {
    den: BigInt,
    complex: bool,
    terms: Vec<(K, BigInt, BigInt)>,
}

impl<K: Monomial> IntegerForm<K> {
    fn new(p: &SparsePoly<K>) -> Self {
        let mut den = BigInt::one();
        let mut complex = false;
        for c in p.terms.values() {
            den = den.lcm(c.re().denom());
            if !c.im().is_zero() {
                complex = true;
                den = den.lcm(c.im().denom());
            }
        }
        let lift = |r: &BigRational| -> BigInt { r.numer() * (&den / r.denom()) };
        let terms = p
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), lift(c.re()), lift(c.im())))
            .collect();
        IntegerForm {
            den,
            complex,
            terms,
        }
    }
}

impl<'a, K: Monomial> Add<&'a SparsePoly<K>> for &'a SparsePoly<K> {
    type Output = SparsePoly<K>;
    fn add(self, rhs: &SparsePoly<K>) -> SparsePoly<K> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl<'a, K: Monomial> Sub<&'a SparsePoly<K>> for &'a SparsePoly<K> {
    type Output = SparsePoly<K>;
    fn sub(self, rhs: &SparsePoly<K>) -> SparsePoly<K> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

impl<'a, K: Monomial> Mul<&'a SparsePoly<K>> for &'a SparsePoly<K> {
    type Output = SparsePoly<K>;
    fn mul(self, rhs: &SparsePoly<K>) -> SparsePoly<K> {
        self.mul_filtered(rhs, |_| true)
    }
}

impl<K: Monomial> Neg for &SparsePoly<K> {
    type Output = SparsePoly<K>;
    fn neg(self) -> SparsePoly<K> {
        SparsePoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl<K: Monomial> $tr<SparsePoly<K>> for SparsePoly<K> {
            type Output = SparsePoly<K>;
            fn $m(self, rhs: SparsePoly<K>) -> SparsePoly<K> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, K: Monomial> $tr<&'a SparsePoly<K>> for SparsePoly<K> {
            type Output = SparsePoly<K>;
            fn $m(self, rhs: &SparsePoly<K>) -> SparsePoly<K> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl<K: Monomial> Neg for SparsePoly<K> {
    type Output = SparsePoly<K>;
    fn neg(self) -> SparsePoly<K> {
        -&self
    }
}

/// Writes `c*m` terms joined by ` + ` / ` - `, highest monomial first.
/// Non-real coefficients are parenthesised so the output re-parses.
pub(crate) fn write_terms<'a, K: Monomial + 'a>(
    terms: impl Iterator<Item = (&'a K, &'a CRat)>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let mut factors = String::new();
        k.write_factors(&mut factors);
        let (neg, mag) = if c.is_real() && c.re().is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        let coeff = if mag.is_real() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        match (factors.is_empty(), mag.is_unit_real()) {
            (true, _) => write!(f, "{coeff}")?,
            (false, true) => write!(f, "{factors}")?,
            (false, false) => write!(f, "{coeff}*{factors}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<K: Monomial> fmt::Display for SparsePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(self.terms.iter().rev(), f)
    }
}

impl<K: Monomial> fmt::Debug for SparsePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn write_power(out: &mut String, name: &str, e: u32) {
    if e == 0 {
        return;
    }
    if !out.is_empty() {
        out.push('*');
    }
    out.push_str(name);
    if e > 1 {
        out.push('^');
        out.push_str(&e.to_string());
    }
}

/// Binomial coefficients `C(n, 0..=n)` as exact rationals.
pub(crate) fn binomial_row(n: u32) -> Vec<CRat> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(CRat::from_bigint(c.clone()));
    for k in 1..=n {
        c = c * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(CRat::from_bigint(c.clone()));
    }
    row
}

/// Exponent vector of variable length, canonicalised without trailing zeros.
/// Backs [`MPoly`](super::MPoly), used for templates over unknown coefficients:
/// variable 0 prints as `x` and variable `j + 1` as `aj`, the coefficient of
/// `x^j` in a recipe template.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Exps(Vec<u32>);

impl Exps {
    pub fn new(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Exps(v)
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Self::new(v)
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn with(&self, index: usize, exp: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = exp;
        Self::new(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Monomial for Exps {
    fn one() -> Self {
        Exps(Vec::new())
    }

    fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.0.clone();
        for (a, b) in v.iter_mut().zip(&short.0) {
            *a += b;
        }
        Exps(v)
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn write_factors(&self, out: &mut String) {
        for (i, &e) in self.0.iter().enumerate() {
            match i {
                0 => write_power(out, "x", e),
                _ => write_power(out, &format!("a{}", i - 1), e),
            }
        }
    }
}
