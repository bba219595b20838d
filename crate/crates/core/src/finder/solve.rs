//! Exact roots of univariate step equations over `Q(i)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cpx::CRat;

/// Rational candidates are only enumerated while both end coefficients stay
/// below this magnitude (trial division up to its square root).
const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

/// The equation has a root outside `Q(i)` that could not be isolated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Irrational;

/// Distinct roots of `Σ c[k] u^k = 0`, sorted by (re, im). The polynomial
/// must not be identically zero; a nonzero constant has no roots.
pub(crate) fn solve_exact(c: &[CRat]) -> Result<Vec<CRat>, Irrational> {
    let mut q: Vec<CRat> = c.to_vec();
    while q.last().is_some_and(Zero::is_zero) {
        q.pop();
    }
    assert!(!q.is_empty(), "identically zero equation");
    let mut roots = Vec::new();
    let zeros = q.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(CRat::zero());
        q.drain(..zeros);
    }
    loop {
        match q.len() - 1 {
            0 => break,
            1 => {
                roots.push(-(&q[0] / &q[1]));
                break;
            }
            2 => {
                roots.extend(quadratic(&q[0], &q[1], &q[2])?);
                break;
            }
            _ => {
                let r = rational_root(&q).ok_or(Irrational)?;
                q = deflate(&q, &r);
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn quadratic(c: &CRat, b: &CRat, a: &CRat) -> Result<Vec<CRat>, Irrational> {
    let four = CRat::from_int(4);
    let disc = b * b - &four * a * c;
    let s = sqrt_gaussian(&disc).ok_or(Irrational)?;
    let two_a = a * &CRat::from_int(2);
    let nb = -b;
    Ok(vec![(&nb + &s) / &two_a, (&nb - &s) / &two_a])
}

fn sqrt_bigint(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn sqrt_rat(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(
        sqrt_bigint(r.numer())?,
        sqrt_bigint(r.denom())?,
    ))
}

/// A square root in `Q(i)` when one exists.
pub(crate) fn sqrt_gaussian(z: &CRat) -> Option<CRat> {
    let (a, b) = (z.re(), z.im());
    if b.is_zero() {
        return if a.is_negative() {
            Some(CRat::new(BigRational::zero(), sqrt_rat(&-a)?))
        } else {
            Some(CRat::real(sqrt_rat(a)?))
        };
    }
    let modulus = sqrt_rat(&z.norm_sqr())?;
    let two = BigRational::from_integer(2.into());
    let re = sqrt_rat(&((&modulus + a) / &two))?;
    let mut im = sqrt_rat(&((&modulus - a) / &two))?;
    if b.is_negative() {
        im = -im;
    }
    Some(CRat::new(re, im))
}

/// A rational root of a real polynomial of degree >= 3, by the rational
/// root theorem over small integers.
fn rational_root(q: &[CRat]) -> Option<CRat> {
    if q.iter().any(|c| !c.is_real()) {
        return None;
    }
    let den = q
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()));
    let ints: Vec<BigInt> = q
        .iter()
        .map(|c| c.re().numer() * (&den / c.re().denom()))
        .collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let limit = BigInt::from(DIVISOR_SEARCH_LIMIT);
    if a0 > limit || an > limit {
        return None;
    }
    let p_divs = divisors(u64::try_from(&a0).ok()?);
    let q_divs = divisors(u64::try_from(&an).ok()?);
    for qd in &q_divs {
        for pd in &p_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(*pd) * sign, BigInt::from(*qd));
                let cand = CRat::real(cand);
                let val: CRat = q
                    .iter()
                    .rev()
                    .fold(CRat::zero(), |acc, c| &(&acc * &cand) + c);
                if val.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divides out `(u - r)`; `r` must be a root.
fn deflate(q: &[CRat], r: &CRat) -> Vec<CRat> {
    let n = q.len() - 1;
    let mut out = vec![CRat::zero(); n];
    let mut carry = CRat::zero();
    for k in (1..=n).rev() {
        carry = &(&carry * r) + &q[k];
        out[k - 1] = carry.clone();
    }
    out
}
