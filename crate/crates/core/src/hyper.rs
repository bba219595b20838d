//! Hyper-derivative, ODE residuals and their classification.
//!
//! The derivative of a recipe `f` is the exact difference quotient
//! `(f(x + α) - f(x)) / α` with `α` a formal infinitesimal. Substituting it
//! into `F(Z, Y, X)` yields a residual in `(x, α)` which decomposes as
//! `P(x) + α·G(x, α)`. The shape of `P` relative to `G` decides where the
//! residual is infinitesimal:
//!
//! | class           | `P`                            | valid on        |
//! |-----------------|--------------------------------|-----------------|
//! | hyper-solution  | `0`                            | all finite `x`  |
//! | hyper Taylor    | `r·x^n`, `r ≠ 0`, `deg G < n`  | infinitesimals  |
//! | hyper local     | `P(0) = 0`, `deg G < deg P`    | infinitesimals  |

use num_traits::Zero;

use crate::cpx::CRat;
use crate::poly::{substitute_tri, BiPoly, TriPoly, UniPoly};

/// `(f(x + α) - f(x)) / α`, exactly. Setting `α = 0` gives `f'`.
pub fn hyper_diff(f: &UniPoly) -> BiPoly {
    let shifted = BiPoly::uni_at_x_plus_alpha(f);
    (&shifted - &BiPoly::from_uni(f))
        .div_alpha_exact()
        .expect("every surviving term of f(x+α) - f(x) carries α")
}

/// `F(f', f, x)` with `f'` the hyper-derivative.
pub fn apply_ode(ode: &TriPoly, f: &UniPoly) -> BiPoly {
    substitute_tri(
        ode,
        &hyper_diff(f),
        &BiPoly::from_uni(f),
        &BiPoly::var_x(),
        |a, b| a * b,
    )
}

/// Where a classified recipe makes the residual infinitesimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    AllFinite,
    InfinitesimalOnly,
}

/// Strongest class a residual `P(x) + α·G(x, α)` belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    HyperSolution { g: BiPoly },
    HyperTaylor { r: CRat, n: u32, g: BiPoly },
    HyperLocal { p: UniPoly, g: BiPoly },
    None { p: UniPoly, g: BiPoly },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::HyperSolution { .. } => "HyperSolution",
            Classification::HyperTaylor { .. } => "HyperTaylor",
            Classification::HyperLocal { .. } => "HyperLocal",
            Classification::None { .. } => "None",
        }
    }

    pub fn g(&self) -> &BiPoly {
        match self {
            Classification::HyperSolution { g }
            | Classification::HyperTaylor { g, .. }
            | Classification::HyperLocal { g, .. }
            | Classification::None { g, .. } => g,
        }
    }

    /// `None` when the residual has a non-infinitesimal constant term.
    pub fn domain(&self) -> Option<Domain> {
        match self {
            Classification::HyperSolution { .. } => Some(Domain::AllFinite),
            Classification::HyperTaylor { .. } | Classification::HyperLocal { .. } => {
                Some(Domain::InfinitesimalOnly)
            }
            Classification::None { p, .. } => {
                p.coeff(0).is_zero().then_some(Domain::InfinitesimalOnly)
            }
        }
    }

    pub fn is_taylor_or_better(&self) -> bool {
        matches!(
            self,
            Classification::HyperSolution { .. } | Classification::HyperTaylor { .. }
        )
    }
}

/// `deg G < bound`, with the zero polynomial below every bound.
fn g_below(g: &BiPoly, bound: usize) -> bool {
    g.deg_x().is_none_or(|d| (d as usize) < bound)
}

pub fn classify(residual: &BiPoly) -> Classification {
    let (p, g) = residual.split_alpha();
    if p.is_zero() {
        return Classification::HyperSolution { g };
    }
    let deg = p.degree().expect("nonzero");
    if deg >= 1 && p.valuation() == Some(deg) && g_below(&g, deg) {
        return Classification::HyperTaylor {
            r: p.coeff(deg),
            n: deg as u32,
            g,
        };
    }
    if satisfies_hyper_local(residual) {
        return Classification::HyperLocal { p, g };
    }
    Classification::None { p, g }
}

/// `residual = α·G`.
pub fn satisfies_hyper_solution(residual: &BiPoly) -> bool {
    residual.at_alpha_zero().is_zero()
}

/// `residual = r·x^n + α·G` with `n ≥ 1` and `deg G < n`. With
/// `allow_zero_r`, `r = 0` is admitted and `n` may be chosen freely.
pub fn satisfies_hyper_taylor(residual: &BiPoly, allow_zero_r: bool) -> bool {
    let (p, g) = residual.split_alpha();
    match p.degree() {
        None => allow_zero_r,
        Some(deg) => deg >= 1 && p.valuation() == Some(deg) && g_below(&g, deg),
    }
}

/// `residual = P + α·G` with `P(0) = 0` and `deg G < deg P`.
pub fn satisfies_hyper_local(residual: &BiPoly) -> bool {
    let (p, g) = residual.split_alpha();
    match p.degree() {
        None => false,
        Some(deg) => p.coeff(0).is_zero() && g_below(&g, deg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_ode, parse_recipe};
    use crate::poly::BiExp;

    fn bi(terms: &[((u32, u32), CRat)]) -> BiPoly {
        BiPoly::from_terms(
            terms
                .iter()
                .map(|((x, a), c)| (BiExp::new(*x, *a), c.clone())),
        )
    }

    #[test]
    fn hyper_diff_cube() {
        let d = hyper_diff(&parse_recipe("x^3").unwrap());
        let expected = bi(&[
            ((2, 0), CRat::from_int(3)),
            ((1, 1), CRat::from_int(3)),
            ((0, 2), CRat::from_int(1)),
        ]);
        assert_eq!(d, expected);
        assert!(hyper_diff(&parse_recipe("7/3").unwrap()).is_zero());
        assert_eq!(
            hyper_diff(&UniPoly::x()),
            BiPoly::constant(CRat::from_int(1))
        );
    }

    #[test]
    fn example_residuals() {
        let r1 = apply_ode(
            &parse_ode("z - 3*x^2").unwrap(),
            &parse_recipe("x^3").unwrap(),
        );
        assert_eq!(r1.to_string(), "3*x*a + a^2");

        let exp3 = parse_recipe("1 + x + 1/2*x^2 + 1/6*x^3").unwrap();
        let r2 = apply_ode(&parse_ode("z - y").unwrap(), &exp3);
        let expected = bi(&[
            ((3, 0), CRat::ratio(-1, 6)),
            ((0, 2), CRat::ratio(1, 6)),
            ((1, 1), CRat::ratio(1, 2)),
            ((0, 1), CRat::ratio(1, 2)),
        ]);
        assert_eq!(r2, expected);

        let bar = parse_recipe("1 + x + 1/2*x^2 + x^3").unwrap();
        let r3 = apply_ode(&parse_ode("z - y").unwrap(), &bar);
        let expected = bi(&[
            ((3, 0), CRat::from_int(-1)),
            ((2, 0), CRat::ratio(5, 2)),
            ((0, 2), CRat::from_int(1)),
            ((1, 1), CRat::from_int(3)),
            ((0, 1), CRat::ratio(1, 2)),
        ]);
        assert_eq!(r3, expected);
    }

    #[test]
    fn classification_of_examples() {
        let ode = parse_ode("z - y").unwrap();
        let c1 = classify(&apply_ode(
            &parse_ode("z - 3*x^2").unwrap(),
            &parse_recipe("x^3").unwrap(),
        ));
        assert_eq!(
            c1,
            Classification::HyperSolution {
                g: bi(&[((1, 0), CRat::from_int(3)), ((0, 1), CRat::from_int(1))])
            }
        );
        assert_eq!(c1.domain(), Some(Domain::AllFinite));

        let c2 = classify(&apply_ode(
            &ode,
            &parse_recipe("1 + x + 1/2*x^2 + 1/6*x^3").unwrap(),
        ));
        assert_eq!(
            c2,
            Classification::HyperTaylor {
                r: CRat::ratio(-1, 6),
                n: 3,
                g: bi(&[
                    ((0, 1), CRat::ratio(1, 6)),
                    ((1, 0), CRat::ratio(1, 2)),
                    ((0, 0), CRat::ratio(1, 2)),
                ]),
            }
        );
        assert_eq!(c2.domain(), Some(Domain::InfinitesimalOnly));

        let c3 = classify(&apply_ode(
            &ode,
            &parse_recipe("1 + x + 1/2*x^2 + x^3").unwrap(),
        ));
        match c3 {
            Classification::HyperLocal { p, .. } => {
                assert_eq!(p, parse_recipe("-x^3 + 5/2*x^2").unwrap())
            }
            other => panic!("expected HyperLocal, got {other:?}"),
        }
    }

    #[test]
    fn degree_ties_are_not_taylor() {
        // P = x, G = x: deg G == deg P, neither Taylor nor local.
        let r = bi(&[((1, 0), CRat::from_int(1)), ((1, 1), CRat::from_int(1))]);
        assert_eq!(classify(&r).tag(), "None");
        assert_eq!(classify(&r).domain(), Some(Domain::InfinitesimalOnly));
        let with_const = bi(&[((0, 0), CRat::from_int(1))]);
        assert_eq!(classify(&with_const).domain(), None);
    }

    #[test]
    fn zero_residual_is_a_solution() {
        let r = apply_ode(&parse_ode("z - y").unwrap(), &UniPoly::zero());
        assert!(r.is_zero());
        assert_eq!(classify(&r).tag(), "HyperSolution");
    }
}
