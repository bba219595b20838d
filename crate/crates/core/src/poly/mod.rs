//! Exact polynomial arithmetic over [`CRat`](crate::cpx::CRat).
//!
//! * [`TriPoly`] holds an ODE `F(Z, Y, X)`: `Z` stands for the derivative,
//!   `Y` for the unknown function and `X` for the independent variable.
//! * [`BiPoly`] holds residuals in `(x, α)`, `α` being the infinitesimal
//!   step of the hyper-derivative, kept as a formal indeterminate.
//! * [`UniPoly`] is a dense recipe polynomial in `x`.
//! * [`FloatPoly`] is the complex-double polynomial handed to the root finder.
//! * [`MPoly`] is a sparse polynomial over any number of variables, used for
//!   templates whose coefficients are themselves unknowns.

mod bi;
mod float;
mod sparse;
mod tri;
mod uni;

pub use bi::{BiExp, BiPoly};
pub use float::FloatPoly;
pub use sparse::{Exps, Monomial, SparsePoly};
pub use tri::{TriExp, TriPoly};
pub use uni::UniPoly;

use thiserror::Error;

/// Multivariate polynomial with variable-length exponent vectors.
pub type MPoly = SparsePoly<Exps>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("scale point must be nonzero")]
    ZeroScale,
    #[error("term {monomial} has no factor of the infinitesimal")]
    NotDivisibleByAlpha { monomial: String },
    #[error("coefficient of {monomial} does not fit in a double")]
    Overflow { monomial: String },
    #[error("substituted value for the infinitesimal must be positive and finite, got {0}")]
    InvalidAlpha(f64),
}

/// Evaluates `F(z, y, x)` in the ring of `P`, where `mul` is the product to
/// use (full or truncated). Powers are cached per variable.
pub(crate) fn substitute_tri<K: Monomial>(
    f: &TriPoly,
    z: &SparsePoly<K>,
    y: &SparsePoly<K>,
    x: &SparsePoly<K>,
    mul: impl Fn(&SparsePoly<K>, &SparsePoly<K>) -> SparsePoly<K>,
) -> SparsePoly<K> {
    let (mz, my, mx) = f.terms().fold((0, 0, 0), |(a, b, c), (k, _)| {
        (a.max(k.z), b.max(k.y), c.max(k.x))
    });
    let powers = |base: &SparsePoly<K>, n: u32| {
        let mut v = vec![SparsePoly::constant(crate::cpx::CRat::from_int(1))];
        for i in 1..=n as usize {
            let next = mul(&v[i - 1], base);
            v.push(next);
        }
        v
    };
    let zp = powers(z, mz);
    let yp = powers(y, my);
    let xp = powers(x, mx);
    let mut out = SparsePoly::zero();
    for (k, c) in f.terms() {
        let zy = mul(&zp[k.z as usize], &yp[k.y as usize]);
        let term = mul(&zy, &xp[k.x as usize]).scale(c);
        out = &out + &term;
    }
    out
}
