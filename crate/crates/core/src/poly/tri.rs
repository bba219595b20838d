use num_traits::Zero;

use super::sparse::{binomial_row, write_power, Monomial, SparsePoly};
use crate::cpx::CRat;

/// Exponents of `Z^z * Y^y * X^x`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct TriExp {
    pub z: u32,
    pub y: u32,
    pub x: u32,
}

impl TriExp {
    pub const fn new(z: u32, y: u32, x: u32) -> Self {
        TriExp { z, y, x }
    }
}

impl Monomial for TriExp {
    fn one() -> Self {
        TriExp::default()
    }
    fn mul(&self, o: &Self) -> Self {
        TriExp::new(self.z + o.z, self.y + o.y, self.x + o.x)
    }
    fn is_one(&self) -> bool {
        *self == TriExp::default()
    }
    fn write_factors(&self, out: &mut String) {
        write_power(out, "z", self.z);
        write_power(out, "y", self.y);
        write_power(out, "x", self.x);
    }
}

/// An ODE `F(Z, Y, X)`; its `Display` output re-parses with `parse_ode`.
pub type TriPoly = SparsePoly<TriExp>;

impl SparsePoly<TriExp> {
    pub fn var_z() -> Self {
        Self::term(TriExp::new(1, 0, 0), CRat::from_int(1))
    }
    pub fn var_y() -> Self {
        Self::term(TriExp::new(0, 1, 0), CRat::from_int(1))
    }
    pub fn var_x() -> Self {
        Self::term(TriExp::new(0, 0, 1), CRat::from_int(1))
    }

    /// Substitutes `X -> X + x0`, leaving `Z` and `Y` alone.
    pub fn shift_x(&self, x0: &CRat) -> Self {
        if x0.is_zero() {
            return self.clone();
        }
        let max = self.terms().map(|(k, _)| k.x).max().unwrap_or(0);
        let pw: Vec<CRat> = std::iter::successors(Some(CRat::from_int(1)), |p| Some(p * x0))
            .take(max as usize + 1)
            .collect();
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            let row = binomial_row(k.x);
            for j in 0..=k.x {
                let coeff = c * &row[j as usize] * &pw[(k.x - j) as usize];
                out.add_term(TriExp::new(k.z, k.y, j), coeff);
            }
        }
        out
    }

    /// True when some monomial contains `X`.
    pub fn has_x(&self) -> bool {
        self.terms().any(|(k, _)| k.x > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_x_on_log_equation() {
        // x*z - 1 moved to center 1 is (x+1)*z - 1.
        let f = &(&TriPoly::var_x() * &TriPoly::var_z()) - &TriPoly::constant(CRat::from_int(1));
        let shifted = f.shift_x(&CRat::from_int(1));
        let expected = TriPoly::from_terms([
            (TriExp::new(1, 0, 1), CRat::from_int(1)),
            (TriExp::new(1, 0, 0), CRat::from_int(1)),
            (TriExp::new(0, 0, 0), CRat::from_int(-1)),
        ]);
        assert_eq!(shifted, expected);
        assert_eq!(f.shift_x(&CRat::zero()), f);
    }

    #[test]
    fn display() {
        let f =
            &(&TriPoly::var_x() * &TriPoly::var_z()) - &TriPoly::var_y().scale(&CRat::ratio(1, 2));
        assert_eq!(f.to_string(), "z*x - 1/2*y");
        assert_eq!(TriPoly::zero().to_string(), "0");
    }
}
