//! The infinitesimal solution algorithm.
//!
//! For each recipe degree `n`:
//!
//! 1. take a recipe `f` (from the finder or from a known Taylor polynomial),
//! 2. form the exact residual `F(f', f, x) = P(x) + α·G(x, α)`,
//! 3. replace `α` by a small real `α*`, giving the float polynomial `F*`,
//! 4. find all complex roots `t*` of `F*`,
//! 5. optionally drop the roots that sit next to nonzero roots of `P`
//!    (those are not infinitesimal), and emit `(t*, f(t*))`.
//!
//! The emitted points form a relation rather than a function: root sets of
//! different degrees may overlap.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::finder::{find_recipes, FinderError, FinderOptions, InitialCondition, Oracle};
use crate::hyper::apply_ode;
use crate::poly::{BiPoly, PolyError, TriPoly, UniPoly};
use crate::roots::{roots_complex, RootError, DEFAULT_ROOT_TOL};

pub const DEFAULT_ALPHA_STAR: f64 = 1e-3;
pub const DEFAULT_DEDUPE_TOL: f64 = 1e-8;
pub const DEFAULT_DEGREE_MIN: usize = 1;
pub const DEFAULT_DEGREE_MAX: usize = 39;
/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "INSOLA_THREADS";

/// One element `(t*, f(t*))` of the solution relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationPoint {
    pub t: Complex64,
    pub value: Complex64,
    /// Degree of the recipe that produced the point.
    pub grade: usize,
    /// Kept by the non-infinitesimal filter (always true when filtering is off).
    pub survivor: bool,
    /// `|F*(t)|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecipeSource {
    /// Coefficient matching; `branch` picks among the recipes found.
    Finder {
        ic: InitialCondition,
        branch: usize,
        options: FinderOptions,
    },
    /// Taylor polynomial of a known solution.
    Oracle(Oracle),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InsolaConfig {
    pub ode: TriPoly,
    pub source: RecipeSource,
    pub alpha_star: f64,
    pub degree_min: usize,
    pub degree_max: usize,
    pub filter: bool,
    pub dedupe_tol: f64,
    pub root_tol: f64,
}

impl InsolaConfig {
    pub fn new(ode: TriPoly, source: RecipeSource) -> Self {
        InsolaConfig {
            ode,
            source,
            alpha_star: DEFAULT_ALPHA_STAR,
            degree_min: DEFAULT_DEGREE_MIN,
            degree_max: DEFAULT_DEGREE_MAX,
            filter: false,
            dedupe_tol: DEFAULT_DEDUPE_TOL,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }

    /// The built-in problem of `oracle`: its equation and Taylor recipes.
    pub fn oracle(oracle: Oracle) -> Self {
        Self::new(oracle.ode(), RecipeSource::Oracle(oracle))
    }

    pub fn validate(&self) -> Result<(), InsolaError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.alpha_star) {
            return Err(InsolaError::InvalidConfig(format!(
                "alpha_star must be positive and finite, got {}",
                self.alpha_star
            )));
        }
        if self.degree_min == 0 || self.degree_min > self.degree_max {
            return Err(InsolaError::InvalidConfig(format!(
                "degree range {}..={} must be nonempty and start at 1 or above",
                self.degree_min, self.degree_max
            )));
        }
        if !positive(self.dedupe_tol) || !positive(self.root_tol) {
            return Err(InsolaError::InvalidConfig(
                "tolerances must be positive".into(),
            ));
        }
        if self.ode.is_zero() {
            return Err(InsolaError::InvalidConfig(
                "equation is the zero polynomial".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InsolaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Why a single degree produced no points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error("branch {index} requested but only {available} recipes exist")]
    MissingBranch { index: usize, available: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeFailure {
    pub degree: usize,
    pub error: StepError,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InsolaReport {
    /// Ordered by degree, then by root (real part, then imaginary part).
    pub points: Vec<RelationPoint>,
    pub failures: Vec<DegreeFailure>,
}

impl InsolaReport {
    pub fn survivors(&self) -> impl Iterator<Item = &RelationPoint> + '_ {
        self.points.iter().filter(|p| p.survivor)
    }

    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Indices into `z` of the elements kept by collapsing points within `tol`
/// of an earlier kept point, scanning in (re, im) order.
fn dedupe_indices(z: &[Complex64], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| cmp_complex(&z[a], &z[b]));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept.iter().all(|&k| (z[k] - z[i]).norm() > tol) {
            kept.push(i);
        }
    }
    kept
}

/// Which entries of `roots_fstar` survive: duplicates within `dedupe_tol`
/// are dropped, then for every distinct nonzero root of `P` the nearest
/// remaining root is removed (ties go to the smaller root in (re, im) order).
/// A root of `P` counts as zero when its modulus is at most `dedupe_tol`.
pub fn survivor_mask(
    roots_fstar: &[Complex64],
    roots_p: &[Complex64],
    dedupe_tol: f64,
) -> Vec<bool> {
    let mut alive: Vec<usize> = dedupe_indices(roots_fstar, dedupe_tol);
    let p_kept = dedupe_indices(roots_p, dedupe_tol);
    for j in p_kept {
        let target = roots_p[j];
        if target.norm() <= dedupe_tol {
            continue;
        }
        let nearest = alive
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                (roots_fstar[a] - target)
                    .norm()
                    .total_cmp(&(roots_fstar[b] - target).norm())
            })
            .map(|(pos, _)| pos);
        if let Some(pos) = nearest {
            alive.remove(pos);
        }
    }
    let mut mask = vec![false; roots_fstar.len()];
    for i in alive {
        mask[i] = true;
    }
    mask
}

/// The roots of `F*` left after removing the ones paired with nonzero roots
/// of `P`, in (re, im) order.
pub fn filter_noninfinitesimal(
    roots_fstar: &[Complex64],
    roots_p: &[Complex64],
    dedupe_tol: f64,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = survivor_mask(roots_fstar, roots_p, dedupe_tol)
        .into_iter()
        .zip(roots_fstar)
        .filter(|(keep, _)| *keep)
        .map(|(_, z)| *z)
        .collect();
    out.sort_by(cmp_complex);
    out
}

/// Everything about one degree that does not depend on `α*`.
struct Prepared {
    degree: usize,
    recipe: UniPoly,
    residual: BiPoly,
    /// Roots of the standard part, when filtering.
    roots_p: Vec<Complex64>,
}

fn recipe_for(cfg: &InsolaConfig, degree: usize) -> Result<UniPoly, StepError> {
    match &cfg.source {
        RecipeSource::Oracle(o) => Ok(o.taylor(degree)),
        RecipeSource::Finder {
            ic,
            branch,
            options,
        } => {
            let mut found = find_recipes(&cfg.ode, degree, ic, options)?;
            if *branch >= found.len() {
                return Err(StepError::MissingBranch {
                    index: *branch,
                    available: found.len(),
                });
            }
            Ok(found.swap_remove(*branch).f)
        }
    }
}

fn prepare(cfg: &InsolaConfig, degree: usize) -> Result<Prepared, StepError> {
    let recipe = recipe_for(cfg, degree)?;
    let residual = apply_ode(&cfg.ode, &recipe);
    let roots_p = if cfg.filter {
        let p = residual.at_alpha_zero();
        if p.degree().unwrap_or(0) == 0 {
            Vec::new()
        } else {
            roots_complex(&p.to_float(), cfg.root_tol)?
        }
    } else {
        Vec::new()
    };
    Ok(Prepared {
        degree,
        recipe,
        residual,
        roots_p,
    })
}

fn emit(
    cfg: &InsolaConfig,
    prep: &Prepared,
    alpha_star: f64,
) -> Result<Vec<RelationPoint>, StepError> {
    let fstar = prep.residual.substitute_alpha(alpha_star)?;
    let mut roots = roots_complex(&fstar, cfg.root_tol)?;
    roots.sort_by(cmp_complex);
    let mask = if cfg.filter {
        survivor_mask(&roots, &prep.roots_p, cfg.dedupe_tol)
    } else {
        vec![true; roots.len()]
    };
    let f = prep.recipe.to_float();
    Ok(roots
        .iter()
        .zip(mask)
        .map(|(&t, survivor)| RelationPoint {
            t,
            value: f.eval(t),
            grade: prep.degree,
            survivor,
            residual: fstar.eval(t).norm(),
        })
        .collect())
}

/// Runs `work` on a pool capped by `INSOLA_THREADS` when it is set.
fn with_pool<T: Send>(work: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

fn prepare_all(cfg: &InsolaConfig) -> Vec<Result<Prepared, DegreeFailure>> {
    (cfg.degree_min..=cfg.degree_max)
        .into_par_iter()
        .map(|degree| prepare(cfg, degree).map_err(|error| DegreeFailure { degree, error }))
        .collect()
}

fn collect(
    cfg: &InsolaConfig,
    prepared: &[Result<Prepared, DegreeFailure>],
    alpha_star: f64,
) -> InsolaReport {
    let per_degree: Vec<Result<Vec<RelationPoint>, DegreeFailure>> = prepared
        .par_iter()
        .map(|p| match p {
            Ok(prep) => emit(cfg, prep, alpha_star).map_err(|error| DegreeFailure {
                degree: prep.degree,
                error,
            }),
            Err(e) => Err(e.clone()),
        })
        .collect();
    let mut report = InsolaReport::default();
    for r in per_degree {
        match r {
            Ok(points) => report.points.extend(points),
            Err(e) => report.failures.push(e),
        }
    }
    report
}

/// Runs every degree of `cfg`. Degrees fail independently; their errors are
/// listed in the report next to the points of the others.
pub fn run_insola(cfg: &InsolaConfig) -> Result<InsolaReport, InsolaError> {
    cfg.validate()?;
    Ok(with_pool(|| {
        let prepared = prepare_all(cfg);
        collect(cfg, &prepared, cfg.alpha_star)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub alpha_star: f64,
    /// Largest `|t*|` among survivors; 0 when there are none.
    pub max_survivor_modulus: f64,
    pub report: InsolaReport,
}

/// [`run_insola`] for each `α*` in turn. Recipes and exact residuals are
/// shared between the runs.
pub fn alpha_sweep(cfg: &InsolaConfig, alphas: &[f64]) -> Result<Vec<SweepEntry>, InsolaError> {
    cfg.validate()?;
    for &a in alphas {
        if !(a > 0.0 && a.is_finite()) {
            return Err(InsolaError::InvalidConfig(format!(
                "alpha values must be positive and finite, got {a}"
            )));
        }
    }
    if alphas.is_empty() {
        return Ok(Vec::new());
    }
    Ok(with_pool(|| {
        let prepared = prepare_all(cfg);
        alphas
            .iter()
            .map(|&alpha_star| {
                let report = collect(cfg, &prepared, alpha_star);
                let max_survivor_modulus =
                    report.survivors().map(|p| p.t.norm()).fold(0.0, f64::max);
                SweepEntry {
                    alpha_star,
                    max_survivor_modulus,
                    report,
                }
            })
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ode;
    use crate::roots::scaled_residual;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn filter_without_p_roots_keeps_everything() {
        let roots = [c(1.0, 0.0), c(0.0, 2.0)];
        assert_eq!(
            filter_noninfinitesimal(&roots, &[], 1e-8),
            vec![c(0.0, 2.0), c(1.0, 0.0)]
        );
    }

    #[test]
    fn filter_removes_nearest() {
        let roots = [c(1.0001, 0.0), c(0.001, 0.0)];
        assert_eq!(
            filter_noninfinitesimal(&roots, &[c(1.0, 0.0)], 1e-8),
            vec![c(0.001, 0.0)]
        );
    }

    #[test]
    fn filter_ignores_zero_and_duplicate_p_roots() {
        let roots = [c(0.5, 0.0), c(-0.5, 0.0), c(2.0, 0.0)];
        let p = [c(0.0, 0.0), c(1e-12, 0.0), c(2.0, 1e-10), c(2.0, 0.0)];
        assert_eq!(
            filter_noninfinitesimal(&roots, &p, 1e-8),
            vec![c(-0.5, 0.0), c(0.5, 0.0)]
        );
    }

    #[test]
    fn filter_tie_goes_to_smaller_root() {
        let roots = [c(1.0, 0.0), c(-1.0, 0.0)];
        assert_eq!(
            filter_noninfinitesimal(&roots, &[c(0.0, 1.0)], 1e-8),
            vec![c(1.0, 0.0)]
        );
    }

    #[test]
    fn filter_dedupes_fstar_roots() {
        let roots = [c(1.0, 0.0), c(1.0 + 1e-10, 0.0), c(3.0, 0.0)];
        let mask = survivor_mask(&roots, &[], 1e-8);
        assert_eq!(mask, vec![true, false, true]);
    }

    #[test]
    fn more_p_roots_than_candidates() {
        let roots = [c(1.0, 0.0)];
        let p = [c(1.0, 0.0), c(2.0, 0.0)];
        assert!(filter_noninfinitesimal(&roots, &p, 1e-8).is_empty());
    }

    #[test]
    fn exp_small_run() {
        let mut cfg = InsolaConfig::oracle(Oracle::Exp);
        cfg.degree_max = 8;
        let report = run_insola(&cfg).unwrap();
        assert!(report.failures.is_empty());
        // F* has degree n for the Taylor recipe of degree n.
        assert_eq!(report.points.len(), (1..=8).sum::<usize>());
        for p in &report.points {
            assert!(p.survivor);
        }
        let f8 = Oracle::Exp.taylor(8);
        let fstar = apply_ode(&cfg.ode, &f8)
            .substitute_alpha(cfg.alpha_star)
            .unwrap();
        for p in report.points.iter().filter(|p| p.grade == 8) {
            assert!(scaled_residual(&fstar, p.t) <= cfg.root_tol);
        }
    }

    #[test]
    fn finder_source_and_missing_branch() {
        let ode = parse_ode("z^2 + y^2 - 1").unwrap();
        let ic = InitialCondition::at_zero(0.into());
        let mut cfg = InsolaConfig::new(
            ode,
            RecipeSource::Finder {
                ic,
                branch: 1,
                options: FinderOptions::default(),
            },
        );
        cfg.degree_max = 4;
        cfg.filter = true;
        let report = run_insola(&cfg).unwrap();
        assert!(report.failures.is_empty());
        if let RecipeSource::Finder {
            branch, options, ..
        } = &mut cfg.source
        {
            *branch = 0;
            *options = FinderOptions::default().positive_slope();
        }
        let positive = run_insola(&cfg).unwrap();
        assert_eq!(report, positive);
        if let RecipeSource::Finder { branch, .. } = &mut cfg.source {
            *branch = 1;
        }
        let partial = run_insola(&cfg).unwrap();
        assert_eq!(partial.failures.len(), 4);
        assert!(matches!(
            partial.failures[0].error,
            StepError::MissingBranch {
                index: 1,
                available: 1
            }
        ));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = InsolaConfig::oracle(Oracle::Exp);
        cfg.alpha_star = 0.0;
        assert!(run_insola(&cfg).is_err());
        let mut cfg = InsolaConfig::oracle(Oracle::Exp);
        cfg.degree_min = 0;
        assert!(run_insola(&cfg).is_err());
        let mut cfg = InsolaConfig::oracle(Oracle::Exp);
        cfg.degree_min = 5;
        cfg.degree_max = 4;
        assert!(run_insola(&cfg).is_err());
    }

    #[test]
    fn sweep_edge_cases() {
        let mut cfg = InsolaConfig::oracle(Oracle::Exp);
        cfg.degree_max = 5;
        assert!(alpha_sweep(&cfg, &[]).unwrap().is_empty());
        let single = alpha_sweep(&cfg, &[cfg.alpha_star]).unwrap();
        assert_eq!(single[0].report, run_insola(&cfg).unwrap());
        assert!(alpha_sweep(&cfg, &[-1.0]).is_err());
    }
}
