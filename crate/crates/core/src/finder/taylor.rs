//! Reference problems with known closed-form solutions.
//!
//! Each [`Oracle`] pairs an ODE with its standard solution and produces the
//! exact Taylor polynomial of that solution at 0. These polynomials can stand
//! in for the coefficient-matching search when the solution is known.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cpx::CRat;
use crate::parse::parse_ode;
use crate::poly::{TriPoly, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Oracle {
    /// `exp(x)` for `z - y`, `f(0) = 1`.
    Exp,
    /// `ln(1 + x)` for `(x+1)*z - 1`, `f(0) = 0`.
    Ln1p,
    /// `sin(x)` for `z^2 + y^2 - 1`, `f(0) = 0`, positive slope.
    Sin,
    /// `(x+1)^-2` for `(x+1)*z + 2*y`, `f(0) = 1`.
    InvSquare,
    /// `exp(-1/(x+1)^2)` for `2*y - (x+1)^3*z`, `f(0) = exp(-1)`.
    ExpNest,
    /// `x^3 + x^2` for `z - 3*x^2 - 2*x`, `f(0) = 0`.
    CubeSquare,
}

impl Oracle {
    pub const ALL: [Oracle; 6] = [
        Oracle::Exp,
        Oracle::Ln1p,
        Oracle::Sin,
        Oracle::InvSquare,
        Oracle::ExpNest,
        Oracle::CubeSquare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::Exp => "exp",
            Oracle::Ln1p => "ln1p",
            Oracle::Sin => "sin",
            Oracle::InvSquare => "inv_square",
            Oracle::ExpNest => "exp_nest",
            Oracle::CubeSquare => "cube_square",
        }
    }

    pub fn ode_text(self) -> &'static str {
        match self {
            Oracle::Exp => "z - y",
            Oracle::Ln1p => "(x+1)*z - 1",
            Oracle::Sin => "z^2 + y^2 - 1",
            Oracle::InvSquare => "(x+1)*z + 2*y",
            Oracle::ExpNest => "2*y - (x+1)^3*z",
            Oracle::CubeSquare => "z - 3*x^2 - 2*x",
        }
    }

    pub fn ode(self) -> TriPoly {
        parse_ode(self.ode_text()).expect("built-in equation parses")
    }

    /// `f(0)`. For `ExpNest` this is the exact value of the double nearest
    /// to `exp(-1)`.
    pub fn initial_value(self) -> CRat {
        match self {
            Oracle::Exp | Oracle::InvSquare => CRat::one(),
            Oracle::Ln1p | Oracle::Sin | Oracle::CubeSquare => CRat::zero(),
            Oracle::ExpNest => CRat::from_f64((-1.0f64).exp()).expect("finite"),
        }
    }

    /// Closed-form solution in double precision.
    pub fn eval(self, x: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Oracle::Exp => x.exp(),
            Oracle::Ln1p => (x + one).ln(),
            Oracle::Sin => x.sin(),
            Oracle::InvSquare => ((x + one) * (x + one)).inv(),
            Oracle::ExpNest => (-((x + one) * (x + one)).inv()).exp(),
            Oracle::CubeSquare => x * x * x + x * x,
        }
    }

    /// Exact Taylor polynomial at 0 containing the powers `0..=degree`.
    pub fn taylor(self, degree: usize) -> UniPoly {
        let n = degree + 1;
        let k_rat = |k: usize| CRat::from_int(k as i64);
        let mut c = vec![CRat::zero(); n];
        match self {
            Oracle::Exp => {
                let mut term = CRat::one();
                for (k, slot) in c.iter_mut().enumerate() {
                    if k > 0 {
                        term = &term / &k_rat(k);
                    }
                    *slot = term.clone();
                }
            }
            Oracle::Ln1p => {
                for (k, slot) in c.iter_mut().enumerate().skip(1) {
                    let v = CRat::ratio(1, k as i64);
                    *slot = if k % 2 == 1 { v } else { -v };
                }
            }
            Oracle::Sin => {
                let mut fact = CRat::one();
                for (k, slot) in c.iter_mut().enumerate() {
                    if k > 0 {
                        fact = &fact * &k_rat(k);
                    }
                    if k % 2 == 1 {
                        let v = CRat::one() / &fact;
                        *slot = if k % 4 == 1 { v } else { -v };
                    }
                }
            }
            Oracle::InvSquare => {
                for (k, slot) in c.iter_mut().enumerate() {
                    let v = k_rat(k + 1);
                    *slot = if k % 2 == 0 { v } else { -v };
                }
            }
            Oracle::ExpNest => {
                // (1+x)^3 f' = 2 f, coefficient of x^k:
                // (k+1) a[k+1] = 2 a[k] - 3k a[k] - 3(k-1) a[k-1] - (k-2) a[k-2]
                c[0] = self.initial_value();
                for k in 0..n - 1 {
                    let mut rhs = &c[k] * &CRat::from_int(2 - 3 * k as i64);
                    if k >= 1 {
                        rhs -= &(&c[k - 1] * &CRat::from_int(3 * (k as i64 - 1)));
                    }
                    if k >= 2 {
                        rhs -= &(&c[k - 2] * &CRat::from_int(k as i64 - 2));
                    }
                    c[k + 1] = &rhs / &k_rat(k + 1);
                }
            }
            Oracle::CubeSquare => {
                for (k, slot) in c.iter_mut().enumerate() {
                    if k == 2 || k == 3 {
                        *slot = CRat::one();
                    }
                }
            }
        }
        UniPoly::new(c)
    }
}

/// Taylor polynomial of the named reference solution.
pub fn taylor_reference(oracle: Oracle, degree: usize) -> UniPoly {
    oracle.taylor(degree)
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Oracle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Oracle::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Oracle::ALL.iter().map(|o| o.name()).collect();
                format!(
                    "unknown oracle `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}
