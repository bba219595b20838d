//! Recipes by coefficient matching.
//!
//! A recipe of degree `d` is the template `f = a0 + a1*x + ... + ad*x^d`.
//! Substituting it into `F(f', f, x)` with the ordinary derivative and asking
//! the coefficients of `x^0 .. x^(d-1)` to vanish gives one equation per power.
//! The equation for `x^k` only involves `a0 ..= a(k+1)`, so walking `k`
//! upwards fixes one new coefficient per step. A step with several roots
//! branches, and every complete branch becomes a [`Recipe`].
//!
//! ```
//! use insola::finder::{find_recipes, FinderOptions, InitialCondition};
//! use insola::parse::{parse_ode, parse_recipe};
//!
//! let ode = parse_ode("z - y").unwrap();
//! let ic = InitialCondition::at_zero(1.into());
//! let found = find_recipes(&ode, 3, &ic, &FinderOptions::default()).unwrap();
//! assert_eq!(found.len(), 1);
//! assert_eq!(found[0].f, parse_recipe("1 + x + 1/2*x^2 + 1/6*x^3").unwrap());
//! ```

mod solve;
mod taylor;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cpx::CRat;
use crate::hyper::apply_ode;
use crate::poly::{substitute_tri, BiPoly, Exps, FloatPoly, MPoly, Monomial, TriPoly, UniPoly};
use crate::roots::{roots_complex, RootError, DEFAULT_ROOT_TOL};

pub use taylor::{taylor_reference, Oracle};

/// `f(x0) = y0`, imposed on a recipe centred at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialCondition {
    pub x0: CRat,
    pub y0: CRat,
}

impl InitialCondition {
    pub fn new(x0: CRat, y0: CRat) -> Self {
        InitialCondition { x0, y0 }
    }

    pub fn at_zero(y0: CRat) -> Self {
        InitialCondition {
            x0: CRat::zero(),
            y0,
        }
    }
}

/// One decision taken while building a recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// The equation of `step` had several roots for `a{coefficient}`.
    /// When `x0 != 0` the initial condition is solved last, as `step == degree`.
    Branch {
        step: usize,
        coefficient: usize,
        chosen: CRat,
        roots: Vec<CRat>,
    },
    /// `a{coefficient}` appeared in no equation and was set to zero.
    Free { coefficient: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub f: UniPoly,
    pub degree: usize,
    pub branch_path: Vec<Decision>,
    pub initial: InitialCondition,
    /// Some coefficient came from a double-precision root.
    pub inexact: bool,
}

impl Recipe {
    pub fn residual(&self, ode: &TriPoly) -> BiPoly {
        apply_ode(ode, &self.f)
    }

    /// Coefficients that were left free and set to zero.
    pub fn free_coefficients(&self) -> impl Iterator<Item = usize> + '_ {
        self.branch_path.iter().filter_map(|d| match d {
            Decision::Free { coefficient } => Some(*coefficient),
            Decision::Branch { .. } => None,
        })
    }
}

/// Restricts which roots a branch may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchConstraint {
    /// The coefficient of `x^j` must be real and positive.
    PositiveCoefficient(usize),
}

impl BranchConstraint {
    fn admits(&self, coefficient: usize, value: &CRat) -> bool {
        match *self {
            BranchConstraint::PositiveCoefficient(j) => {
                j != coefficient || (value.is_real() && value.re().is_positive())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinderOptions {
    /// Upper bound on the number of completed recipes.
    pub max_branches: usize,
    pub constraints: Vec<BranchConstraint>,
    /// Use double-precision roots for steps that have no exact solution;
    /// the resulting recipes are marked `inexact`.
    pub numeric_fallback: bool,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions {
            max_branches: 64,
            constraints: Vec::new(),
            numeric_fallback: false,
        }
    }
}

impl FinderOptions {
    /// Keeps only recipes whose coefficient of `x` is positive.
    pub fn positive_slope(mut self) -> Self {
        self.constraints
            .push(BranchConstraint::PositiveCoefficient(1));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FinderError {
    #[error("recipe degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("the zero polynomial is not a differential equation")]
    ZeroOde,
    #[error(
        "step {step}: equation {equation} = 0 involves several unknown coefficients {unknowns:?}"
    )]
    UnderdeterminedStep {
        step: usize,
        unknowns: Vec<usize>,
        equation: String,
    },
    #[error("step {step}: equation {equation} = 0 has no solution")]
    InconsistentStep { step: usize, equation: String },
    #[error("more than {limit} recipes")]
    BranchOverflow { limit: usize },
    #[error("step {step}: equation {equation} = 0 for a{coefficient} has no exact root")]
    IrrationalStep {
        step: usize,
        coefficient: usize,
        equation: String,
    },
    #[error("no recipe satisfies the initial condition and branch constraints")]
    EmptyFeasibleSet,
    #[error("numeric root fallback failed: {0}")]
    NumericFallback(#[from] RootError),
}

/// All recipes of `degree` for `ode` meeting `ic`, in a fixed order: roots of
/// each branching step are explored from smallest to largest (real part,
/// then imaginary part).
///
/// With `ic.x0 == 0` the constant term is `y0` from the start. Otherwise the
/// constant term stays symbolic through the matching steps, which must then
/// be linear in their new coefficient, and `f(x0) = y0` is solved last.
///
/// Branches that end in an inconsistent or unsolvable step are dropped; if no
/// branch survives, the first failure met is returned.
pub fn find_recipes(
    ode: &TriPoly,
    degree: usize,
    ic: &InitialCondition,
    opts: &FinderOptions,
) -> Result<Vec<Recipe>, FinderError> {
    if degree == 0 {
        return Err(FinderError::InvalidDegree(degree));
    }
    if ode.is_zero() {
        return Err(FinderError::ZeroOde);
    }
    let param = !ic.x0.is_zero();
    let mut known = vec![None; degree + 1];
    known[0] = Some(if param {
        var(coef_var(0))
    } else {
        MPoly::constant(ic.y0.clone())
    });
    let start = Branch {
        known,
        pending: Vec::new(),
        path: Vec::new(),
        param_constraints: Vec::new(),
        inexact: false,
    };
    let mut search = Search {
        ode,
        degree,
        ic,
        opts,
        param,
        out: Vec::new(),
        first_error: None,
    };
    search.explore(start, 0)?;
    if search.out.is_empty() {
        return Err(search.first_error.unwrap_or(FinderError::EmptyFeasibleSet));
    }
    Ok(search.out)
}

/// `F(f', f, x)` for the fully symbolic template of `degree`, with the
/// ordinary derivative. Variable 0 is `x`; variable `j + 1` is `aj`.
pub fn template_residual(ode: &TriPoly, degree: usize) -> MPoly {
    let f = (0..=degree).fold(MPoly::zero(), |acc, j| {
        &acc + &MPoly::term(Exps::var(X, j as u32).with(coef_var(j), 1), CRat::one())
    });
    substitute_tri(ode, &x_derivative(&f), &f, &var(X), |a, b| a * b)
}

const X: usize = 0;

fn coef_var(j: usize) -> usize {
    j + 1
}

fn var(index: usize) -> MPoly {
    MPoly::term(Exps::var(index, 1), CRat::one())
}

fn x_derivative(p: &MPoly) -> MPoly {
    MPoly::from_terms(p.terms().filter(|(k, _)| k.get(X) > 0).map(|(k, c)| {
        let e = k.get(X);
        (k.with(X, e - 1), c * &CRat::from_int(e as i64))
    }))
}

fn vars_of(p: &MPoly) -> BTreeSet<usize> {
    p.terms()
        .flat_map(|(k, _)| {
            k.as_slice()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, _)| i)
        })
        .collect()
}

/// Coefficients of `p` as a polynomial in variable `v`.
fn split_var(p: &MPoly, v: usize) -> Vec<MPoly> {
    let deg = p.terms().map(|(k, _)| k.get(v)).max().unwrap_or(0) as usize;
    let mut out = vec![MPoly::zero(); deg + 1];
    for (k, c) in p.terms() {
        out[k.get(v) as usize].add_term(k.with(v, 0), c.clone());
    }
    out
}

fn as_constant(p: &MPoly) -> Option<CRat> {
    match p.len() {
        0 => Some(CRat::zero()),
        1 => {
            let (k, c) = p.terms().next()?;
            k.is_one().then(|| c.clone())
        }
        _ => None,
    }
}

/// `p` with variable `v` replaced by `value`; `p` may only involve `v`.
fn eval_in(p: &MPoly, v: usize, value: &CRat) -> CRat {
    p.terms().map(|(k, c)| c * &value.pow(k.get(v))).sum()
}

fn univariate(p: &MPoly, v: usize) -> Vec<CRat> {
    split_var(p, v)
        .iter()
        .map(|c| as_constant(c).expect("single-variable polynomial"))
        .collect()
}

fn float_roots(c: &[CRat]) -> Result<Vec<CRat>, FinderError> {
    let p = FloatPoly::new(c.iter().map(CRat::to_complex64).collect());
    let mut roots: Vec<CRat> = roots_complex(&p, DEFAULT_ROOT_TOL)?
        .into_iter()
        .map(|z| CRat::from_complex64(z).ok_or(RootError::NonFinite))
        .collect::<Result<_, _>>()?;
    roots.sort();
    roots.dedup();
    Ok(roots)
}

#[derive(Clone)]
struct Branch {
    /// Value of each coefficient; with a symbolic constant term these are
    /// polynomials in `a0`, otherwise constants.
    known: Vec<Option<MPoly>>,
    pending: Vec<usize>,
    path: Vec<Decision>,
    /// Equations in `a0` alone met during matching.
    param_constraints: Vec<MPoly>,
    inexact: bool,
}

struct Search<'a> {
    ode: &'a TriPoly,
    degree: usize,
    ic: &'a InitialCondition,
    opts: &'a FinderOptions,
    param: bool,
    out: Vec<Recipe>,
    first_error: Option<FinderError>,
}

enum Step {
    Continue(Branch),
    Split(Vec<Branch>),
    Dead(FinderError),
}

impl Search<'_> {
    fn explore(&mut self, mut branch: Branch, from: usize) -> Result<(), FinderError> {
        for k in from..self.degree {
            match self.step(branch, k) {
                Step::Continue(b) => branch = b,
                Step::Split(children) => {
                    for child in children {
                        self.explore(child, k + 1)?;
                    }
                    return Ok(());
                }
                Step::Dead(e) => {
                    self.first_error.get_or_insert(e);
                    return Ok(());
                }
            }
        }
        self.finish(branch)
    }

    fn admits(&self, coefficient: usize, value: &CRat) -> bool {
        self.opts
            .constraints
            .iter()
            .all(|c| c.admits(coefficient, value))
    }

    /// The coefficient of `x^k` in the residual, with unknown coefficients
    /// kept as variables.
    fn equation(&self, branch: &Branch, k: usize) -> MPoly {
        let mut f = MPoly::zero();
        for j in 0..=k + 1 {
            let c = match &branch.known[j] {
                Some(v) => v.clone(),
                None => var(coef_var(j)),
            };
            f = &f + &c.shift_by(&Exps::var(X, j as u32));
        }
        let keep = |e: &Exps| e.get(X) <= k as u32;
        let all = substitute_tri(self.ode, &x_derivative(&f), &f, &var(X), |a, b| {
            a.mul_filtered(b, keep)
        });
        MPoly::from_terms(
            all.terms()
                .filter(|(e, _)| e.get(X) == k as u32)
                .map(|(e, c)| (e.with(X, 0), c.clone())),
        )
    }

    fn step(&self, mut branch: Branch, k: usize) -> Step {
        let eq = self.equation(&branch, k);
        let newest = k + 1;
        branch.pending.push(newest);
        let vars = vars_of(&eq);
        let involves_param = self.param && vars.contains(&coef_var(0));
        let unknowns: Vec<usize> = vars
            .iter()
            .map(|v| v - 1)
            .filter(|&j| j > 0 || !self.param)
            .collect();
        match unknowns.as_slice() {
            [] if involves_param => {
                branch.param_constraints.push(eq);
                Step::Continue(branch)
            }
            [] if eq.is_zero() => Step::Continue(branch),
            [] => Step::Dead(FinderError::InconsistentStep {
                step: k,
                equation: eq.to_string(),
            }),
            [u] => self.solve_for(branch, k, *u, &eq, involves_param),
            _ => Step::Dead(FinderError::UnderdeterminedStep {
                step: k,
                unknowns,
                equation: eq.to_string(),
            }),
        }
    }

    fn solve_for(
        &self,
        mut branch: Branch,
        k: usize,
        u: usize,
        eq: &MPoly,
        involves_param: bool,
    ) -> Step {
        branch.pending.retain(|&j| j != u);
        let parts = split_var(eq, coef_var(u));
        if involves_param {
            // Only a linear equation with constant leading coefficient keeps
            // the new coefficient polynomial in a0.
            let lead = match parts.as_slice() {
                [_, lead] => as_constant(lead),
                _ => None,
            };
            return match lead {
                Some(lead) => {
                    let value = parts[0].scale(&-(CRat::one() / lead));
                    branch.known[u] = Some(value);
                    Step::Continue(branch)
                }
                None => Step::Dead(FinderError::UnderdeterminedStep {
                    step: k,
                    unknowns: vec![0, u],
                    equation: eq.to_string(),
                }),
            };
        }
        let coeffs: Vec<CRat> = parts
            .iter()
            .map(|c| as_constant(c).expect("constants once a0 is known"))
            .collect();
        let (roots, inexact) = match solve::solve_exact(&coeffs) {
            Ok(r) => (r, false),
            Err(solve::Irrational) if self.opts.numeric_fallback => match float_roots(&coeffs) {
                Ok(r) => (r, true),
                Err(e) => return Step::Dead(e),
            },
            Err(solve::Irrational) => {
                return Step::Dead(FinderError::IrrationalStep {
                    step: k,
                    coefficient: u,
                    equation: eq.to_string(),
                })
            }
        };
        branch.inexact |= inexact;
        let admitted: Vec<CRat> = roots
            .iter()
            .filter(|r| self.admits(u, r))
            .cloned()
            .collect();
        match admitted.len() {
            0 => Step::Dead(FinderError::EmptyFeasibleSet),
            1 => {
                branch.known[u] = Some(MPoly::constant(admitted[0].clone()));
                Step::Continue(branch)
            }
            _ => Step::Split(
                admitted
                    .iter()
                    .map(|r| {
                        let mut b = branch.clone();
                        b.known[u] = Some(MPoly::constant(r.clone()));
                        b.path.push(Decision::Branch {
                            step: k,
                            coefficient: u,
                            chosen: r.clone(),
                            roots: roots.clone(),
                        });
                        b
                    })
                    .collect(),
            ),
        }
    }

    fn finish(&mut self, mut branch: Branch) -> Result<(), FinderError> {
        branch.pending.sort_unstable();
        for &j in &branch.pending {
            branch.known[j] = Some(MPoly::zero());
            branch.path.push(Decision::Free { coefficient: j });
        }
        if !self.param {
            let coeffs = branch
                .known
                .iter()
                .map(|c| as_constant(c.as_ref().expect("all coefficients set")).expect("constant"))
                .collect();
            return self.emit(UniPoly::new(coeffs), branch.path, branch.inexact);
        }

        let a0 = coef_var(0);
        let x0 = &self.ic.x0;
        let at_x0 = branch
            .known
            .iter()
            .enumerate()
            .fold(MPoly::zero(), |acc, (j, c)| {
                &acc + &c
                    .as_ref()
                    .expect("all coefficients set")
                    .scale(&x0.pow(j as u32))
            });
        let initial = &at_x0 - &MPoly::constant(self.ic.y0.clone());
        let mut constraints = vec![initial];
        constraints.append(&mut branch.param_constraints);
        let pick = constraints
            .iter()
            .filter(|c| !c.is_zero())
            .min_by_key(|c| split_var(c, a0).len());
        let (roots, inexact) = match pick {
            None => {
                branch.path.push(Decision::Free { coefficient: 0 });
                (vec![CRat::zero()], false)
            }
            Some(c) => {
                let coeffs = univariate(c, a0);
                if coeffs.len() == 1 {
                    self.first_error
                        .get_or_insert(FinderError::EmptyFeasibleSet);
                    return Ok(());
                }
                match solve::solve_exact(&coeffs) {
                    Ok(r) => (r, false),
                    Err(solve::Irrational) if self.opts.numeric_fallback => {
                        match float_roots(&coeffs) {
                            Ok(r) => (r, true),
                            Err(e) => {
                                self.first_error.get_or_insert(e);
                                return Ok(());
                            }
                        }
                    }
                    Err(solve::Irrational) => {
                        self.first_error.get_or_insert(FinderError::IrrationalStep {
                            step: self.degree,
                            coefficient: 0,
                            equation: c.to_string(),
                        });
                        return Ok(());
                    }
                }
            }
        };
        let feasible: Vec<CRat> = roots
            .iter()
            .filter(|r| inexact || constraints.iter().all(|c| eval_in(c, a0, r).is_zero()))
            .cloned()
            .collect();
        if feasible.is_empty() {
            self.first_error
                .get_or_insert(FinderError::EmptyFeasibleSet);
        }
        for r in &feasible {
            let coeffs = branch
                .known
                .iter()
                .map(|c| eval_in(c.as_ref().expect("all coefficients set"), a0, r))
                .collect();
            let mut path = branch.path.clone();
            if feasible.len() > 1 {
                path.push(Decision::Branch {
                    step: self.degree,
                    coefficient: 0,
                    chosen: r.clone(),
                    roots: roots.clone(),
                });
            }
            self.emit(UniPoly::new(coeffs), path, branch.inexact || inexact)?;
        }
        Ok(())
    }

    fn emit(
        &mut self,
        f: UniPoly,
        branch_path: Vec<Decision>,
        inexact: bool,
    ) -> Result<(), FinderError> {
        let admitted = (0..=self.degree).all(|j| self.admits(j, &f.coeff(j)));
        if !admitted {
            self.first_error
                .get_or_insert(FinderError::EmptyFeasibleSet);
            return Ok(());
        }
        self.out.push(Recipe {
            f,
            degree: self.degree,
            branch_path,
            initial: self.ic.clone(),
            inexact,
        });
        if self.out.len() > self.opts.max_branches {
            return Err(FinderError::BranchOverflow {
                limit: self.opts.max_branches,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::classify;
    use crate::parse::{parse_ode, parse_recipe};

    fn ic0(y0: i64) -> InitialCondition {
        InitialCondition::at_zero(CRat::from_int(y0))
    }

    fn recipes(ode: &str, degree: usize, ic: &InitialCondition) -> Vec<Recipe> {
        find_recipes(
            &parse_ode(ode).unwrap(),
            degree,
            ic,
            &FinderOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn circle_equation_branches_on_slope() {
        let found = recipes("z^2 + y^2 - 1", 2, &ic0(0));
        let fs: Vec<String> = found.iter().map(|r| r.f.to_string()).collect();
        assert_eq!(fs, ["-x", "x"]);
        for r in &found {
            match r.branch_path.as_slice() {
                [Decision::Branch {
                    step: 0,
                    coefficient: 1,
                    roots,
                    ..
                }] => {
                    assert_eq!(roots, &[CRat::from_int(-1), CRat::from_int(1)]);
                }
                other => panic!("unexpected path {other:?}"),
            }
        }
        let ode = parse_ode("z^2 + y^2 - 1").unwrap();
        let p = found[1].residual(&ode).at_alpha_zero();
        assert_eq!(p, parse_recipe("x^2").unwrap());
    }

    #[test]
    fn positive_slope_keeps_one_branch() {
        let ode = parse_ode("z^2 + y^2 - 1").unwrap();
        let opts = FinderOptions::default().positive_slope();
        let found = find_recipes(&ode, 5, &ic0(0), &opts).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f, taylor_reference(Oracle::Sin, 5));
    }

    #[test]
    fn polynomial_solution() {
        let found = recipes("z - 3*x^2 - 2*x", 3, &ic0(0));
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f, parse_recipe("x^3 + x^2").unwrap());
    }

    #[test]
    fn exponential() {
        let found = recipes("z - y", 3, &ic0(1));
        assert_eq!(
            found[0].f,
            parse_recipe("1 + x + 1/2*x^2 + 1/6*x^3").unwrap()
        );
        assert!(found[0].branch_path.is_empty());
    }

    #[test]
    fn template_of_circle_equation() {
        let st = template_residual(&parse_ode("z^2 + y^2 - 1").unwrap(), 2);
        // c = a0, b = a1, a = a2
        let a = var(3);
        let b = var(2);
        let c = var(1);
        let x = var(0);
        let two = CRat::from_int(2);
        let four = CRat::from_int(4);
        let expected = &(&(&(&(&a * &a) * &x.pow(4)) + &(&(&a * &b).scale(&two) * &x.pow(3)))
            + &(&(&(&(&a * &a).scale(&four) + &(&b * &b)) + &(&a * &c).scale(&two)) * &x.pow(2)))
            + &(&(&(&(&a * &b).scale(&four) + &(&b * &c).scale(&two)) * &x)
                + &(&(&(&b * &b) + &(&c * &c)) - &MPoly::constant(CRat::one())));
        assert_eq!(st, expected);
        assert!(st.to_string().starts_with("x^4*a2^2 + "), "{st}");
    }

    #[test]
    fn unconstrained_coefficient_is_free() {
        // y = x: the slope only shows up at step 1, the top coefficient never.
        let found = recipes("y - x", 2, &ic0(0));
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f, UniPoly::x());
        assert_eq!(found[0].free_coefficients().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn inconsistent_and_underdetermined_steps() {
        let err = find_recipes(
            &parse_ode("y - 1").unwrap(),
            2,
            &ic0(0),
            &FinderOptions::default(),
        );
        assert!(matches!(
            err,
            Err(FinderError::InconsistentStep { step: 0, .. })
        ));
        let err = find_recipes(
            &parse_ode("y").unwrap(),
            1,
            &ic0(0),
            &FinderOptions::default(),
        )
        .unwrap();
        assert_eq!(err[0].f, UniPoly::zero());
        let err = find_recipes(
            &parse_ode("z - 1").unwrap(),
            0,
            &ic0(0),
            &FinderOptions::default(),
        );
        assert_eq!(err, Err(FinderError::InvalidDegree(0)));
        let err = find_recipes(&TriPoly::zero(), 2, &ic0(0), &FinderOptions::default());
        assert_eq!(err, Err(FinderError::ZeroOde));
    }

    #[test]
    fn irrational_step_and_numeric_fallback() {
        let ode = parse_ode("z^2 - 2").unwrap();
        let err = find_recipes(&ode, 1, &ic0(0), &FinderOptions::default());
        assert!(matches!(
            err,
            Err(FinderError::IrrationalStep {
                step: 0,
                coefficient: 1,
                ..
            })
        ));
        let opts = FinderOptions {
            numeric_fallback: true,
            ..FinderOptions::default()
        };
        let found = find_recipes(&ode, 1, &ic0(0), &opts).unwrap();
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|r| r.inexact));
        let slope = found[1].f.coeff(1).to_complex64();
        assert!((slope.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn branch_overflow() {
        // Each step of z^2 - 1 branches on ±1.
        let opts = FinderOptions {
            max_branches: 1,
            ..FinderOptions::default()
        };
        let err = find_recipes(&parse_ode("z^2 - 1").unwrap(), 1, &ic0(0), &opts);
        assert_eq!(err, Err(FinderError::BranchOverflow { limit: 1 }));
    }

    #[test]
    fn initial_condition_away_from_center() {
        // z - 2x - 2 with f(-1) = 0: f = x^2 + 2x + 1.
        let ic = InitialCondition::new(CRat::from_int(-1), CRat::zero());
        let found = recipes("z - 2*x - 2", 2, &ic);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].f, parse_recipe("x^2 + 2*x + 1").unwrap());
        assert_eq!(found[0].f.eval(&ic.x0), ic.y0);

        // z - y with f(-1) = 1 at degree 2: a0 (1 - 1 + 1/2) = 1.
        let ic = InitialCondition::new(CRat::from_int(-1), CRat::one());
        let found = recipes("z - y", 2, &ic);
        assert_eq!(found[0].f, parse_recipe("2 + 2*x + x^2").unwrap());
    }

    #[test]
    fn low_residual_orders_vanish() {
        // Linear equations without X^2 terms give a single leftover monomial,
        // so the recipe is a hyper Taylor approximation. Nonlinear or
        // X-heavy equations leave several higher powers: hyper local.
        let cases = [
            ("z - y", 1, true),
            ("(x+1)*z - 1", 0, true),
            ("z - 3*x^2 - 2*x", 0, false),
            ("2*y - (x+1)^3*z", 1, false),
            ("z^2 + y^2 - 1", 0, false),
        ];
        for (text, y0, taylor) in cases {
            let ode = parse_ode(text).unwrap();
            for d in 1..=6 {
                for r in find_recipes(&ode, d, &ic0(y0), &FinderOptions::default()).unwrap() {
                    let res = r.residual(&ode);
                    let p = res.at_alpha_zero();
                    assert!(p.valuation().is_none_or(|v| v >= d), "{text}: {}", r.f);
                    let class = classify(&res);
                    if taylor {
                        assert!(class.is_taylor_or_better(), "{text}: {}", r.f);
                    } else {
                        assert_ne!(class.tag(), "None", "{text}: {}", r.f);
                    }
                    assert_eq!(r.f.eval(&CRat::zero()), CRat::from_int(y0));
                }
            }
        }
    }
}
