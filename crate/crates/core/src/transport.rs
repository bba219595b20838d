//! Moving equations and recipes to other center points, and three ways of
//! turning local recipes into numbers along a path.
//!
//! The equation `F` at `x0` is `F(Z, Y, X + x0)`. A recipe for `F` at 0 can be
//! carried to `x0` by one of three [`TransportRule`]s; whether the carried
//! recipe is still a hyper Taylor approximation depends on the equation:
//!
//! | rule       | recipe at `x0` | works for               |
//! |------------|----------------|-------------------------|
//! | `Identity` | `f(x)`         | `F` without `X`, `z - y` |
//! | `Shift`    | `f(x + x0)`    | hyper-solutions only    |
//! | `Scale`    | `f1(x / x0)`   | `x*z - 1`, `x*z + n*y`  |
//!
//! [`first_idea_eval`] solves the problem at `t` directly, [`walk`] chains
//! recipes over caller-supplied steps, and [`check_good_window`] bounds the
//! standard part of a residual on a disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::cpx::CRat;
use crate::finder::{find_recipes, FinderError, FinderOptions, InitialCondition, Recipe};
use crate::hyper::{apply_ode, classify, Classification};
use crate::poly::{PolyError, TriPoly, UniPoly};

/// Samples on the disk boundary used when the caller has no preference.
pub const DEFAULT_WINDOW_SAMPLES: usize = 256;
/// Factor applied to the sampled maximum to cover the gaps between samples.
pub const WINDOW_SAFETY: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransportRule {
    Identity,
    Shift,
    Scale,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error("walk step {step}: {source}")]
    Walk { step: usize, source: FinderError },
    #[error("window check needs t != 0 and at least 16 samples")]
    InvalidWindow,
}

/// `F(Z, Y, X + x0)`.
pub fn ode_at(ode: &TriPoly, x0: &CRat) -> TriPoly {
    ode.shift_x(x0)
}

/// The recipe for the equation at `x0`, built from `f` by `rule`. For
/// `Scale`, `f` is the recipe at center 1.
pub fn transport_recipe(f: &UniPoly, x0: &CRat, rule: TransportRule) -> Result<UniPoly, PolyError> {
    match rule {
        TransportRule::Identity => Ok(f.clone()),
        TransportRule::Shift => Ok(f.shift_x(x0)),
        TransportRule::Scale => f.scale_x(x0),
    }
}

/// Classifies the transported recipe against the equation at each probe.
pub fn check_transport(
    ode: &TriPoly,
    base: &UniPoly,
    rule: TransportRule,
    probes: &[CRat],
) -> Result<Vec<Classification>, TransportError> {
    probes
        .par_iter()
        .map(|x0| {
            let f = transport_recipe(base, x0, rule)?;
            Ok(classify(&apply_ode(&ode_at(ode, x0), &f)))
        })
        .collect()
}

/// The first recipe for `F` at `t` with `f(ic.x0 - t) = ic.y0`, evaluated at 0.
pub fn first_idea_eval(
    ode: &TriPoly,
    ic: &InitialCondition,
    t: &CRat,
    degree: usize,
    opts: &FinderOptions,
) -> Result<CRat, TransportError> {
    let shifted = InitialCondition::new(&ic.x0 - t, ic.y0.clone());
    let found = find_recipes(&ode_at(ode, t), degree, &shifted, opts)?;
    Ok(found[0].f.eval(&CRat::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowCheck {
    pub good: bool,
    /// Largest sampled `|st(F_t)|` times [`WINDOW_SAFETY`].
    pub max: f64,
}

/// Whether `|st(F_t(f', f, x))| < eps` on the disk `|x + t/2| <= |t|/2`.
///
/// The standard part is a polynomial, so its modulus peaks on the boundary
/// circle; `samples` equispaced points include `x = 0` and `x = -t`.
pub fn check_good_window(
    ode: &TriPoly,
    f: &UniPoly,
    t: &CRat,
    eps: f64,
    samples: usize,
) -> Result<WindowCheck, TransportError> {
    if t.is_zero() || samples < 16 {
        return Err(TransportError::InvalidWindow);
    }
    let st = apply_ode(&ode_at(ode, t), f).at_alpha_zero().to_float();
    let half = t.to_complex64() / 2.0;
    let observed = (0..samples)
        .map(|j| {
            let theta = TAU * j as f64 / samples as f64;
            let x = -half + half * Complex64::from_polar(1.0, theta);
            st.eval(x).norm()
        })
        .fold(0.0, f64::max);
    let max = observed * WINDOW_SAFETY;
    Ok(WindowCheck {
        good: max < eps,
        max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkEntry {
    /// Sum of the steps taken so far.
    pub t: CRat,
    /// Approximate solution value at `t`.
    pub value: CRat,
    /// Recipe for the equation at `t` with `f(0) = value`.
    pub recipe: Recipe,
    /// Step that led here; zero for the start.
    pub step: CRat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub degree: usize,
    pub entries: Vec<WalkEntry>,
}

impl WalkTrace {
    pub fn values(&self) -> Vec<CRat> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

/// Steps along `steps`: find a recipe at the current point, evaluate it one
/// step ahead, move the equation there and repeat. `y0` is the value at 0.
pub fn walk(
    ode: &TriPoly,
    y0: &CRat,
    steps: &[CRat],
    degree: usize,
    opts: &FinderOptions,
) -> Result<WalkTrace, TransportError> {
    let find = |ode: &TriPoly, value: &CRat, step: usize| {
        find_recipes(ode, degree, &InitialCondition::at_zero(value.clone()), opts)
            .map(|mut found| found.swap_remove(0))
            .map_err(|source| TransportError::Walk { step, source })
    };
    let mut current = ode.clone();
    let mut entries = vec![WalkEntry {
        t: CRat::zero(),
        value: y0.clone(),
        recipe: find(&current, y0, 0)?,
        step: CRat::zero(),
    }];
    for (k, step) in steps.iter().enumerate() {
        let last = entries.last().expect("walk starts with one entry");
        let value = last.recipe.f.eval(step);
        let t = &last.t + step;
        current = ode_at(&current, step);
        let recipe = find(&current, &value, k + 1)?;
        entries.push(WalkEntry {
            t,
            value,
            recipe,
            step: step.clone(),
        });
    }
    Ok(WalkTrace { degree, entries })
}
