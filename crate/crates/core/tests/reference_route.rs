//! Cross-checks insola against a second route: companion-matrix eigenvalues
//! for the roots and the reference filter loop (sort by distance, drop the
//! nearest) for the survivors.

use insola::finder::{taylor_reference, Oracle};
use insola::hyper::apply_ode;
use insola::insola::{run_insola, InsolaConfig};
use insola::poly::FloatPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;

const ALPHA: f64 = 1e-3;
const DEDUPE: f64 = 1e-8;
const SHIFT: f64 = 0.1234;

/// Zero coefficients at the bottom become exact zero roots, as `roots` does.
fn eigen_roots(p: &FloatPoly) -> Vec<Complex64> {
    let all = p.coeffs();
    let zeros = all
        .iter()
        .take_while(|c| **c == Complex64::new(0.0, 0.0))
        .count();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    out.extend(companion_eigenvalues(&all[zeros..]));
    out
}

/// Eigenvalues of the real companion matrix; the oracle problems have real
/// coefficients. The matrix is shifted by `SHIFT` first: the Schur iteration
/// has no exceptional shifts and stalls on spectra symmetric about 0.
fn companion_eigenvalues(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    assert!(c.iter().all(|z| z.im == 0.0), "real coefficients expected");
    let lead = c[n].re;
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j].re / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    }) - DMatrix::identity(n, n) * SHIFT;
    nalgebra::Schur::try_new(m, 1e-15, 100_000)
        .unwrap_or_else(|| panic!("Schur form did not converge for {c:?}"))
        .complex_eigenvalues()
        .iter()
        .map(|z| z + SHIFT)
        .collect()
}

fn reference_filter(mut tf: Vec<Complex64>, tp: &[Complex64]) -> Vec<Complex64> {
    let mut distinct: Vec<Complex64> = Vec::new();
    for &p in tp {
        if p.norm() > DEDUPE && distinct.iter().all(|q| (q - p).norm() > DEDUPE) {
            distinct.push(p);
        }
    }
    let mut kept: Vec<Complex64> = Vec::new();
    for &z in &tf {
        if kept.iter().all(|k| (k - z).norm() > DEDUPE) {
            kept.push(z);
        }
    }
    tf = kept;
    for p in distinct {
        if tf.is_empty() {
            break;
        }
        let mut order: Vec<usize> = (0..tf.len()).collect();
        order.sort_by(|&a, &b| (tf[a] - p).norm().total_cmp(&(tf[b] - p).norm()));
        tf = order[1..].iter().map(|&i| tf[i]).collect();
    }
    tf
}

/// Every element of `a` has a partner in `b` within `tol`, one to one.
fn same_multiset(a: &[Complex64], b: &[Complex64], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("sizes {} and {}", a.len(), b.len()));
    }
    let mut left = b.to_vec();
    for z in a {
        let (i, d) = left
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if d > tol * z.norm().max(1.0) {
            return Err(format!("{z} has no partner (nearest at {d:e})"));
        }
        left.swap_remove(i);
    }
    Ok(())
}

fn check(oracle: Oracle, filter: bool, max_degree: usize) {
    let mut cfg = InsolaConfig::oracle(oracle);
    cfg.filter = filter;
    cfg.degree_max = max_degree;
    cfg.alpha_star = ALPHA;
    let report = run_insola(&cfg).unwrap();
    assert!(report.failures.is_empty());
    for degree in 1..=max_degree {
        let f = taylor_reference(oracle, degree);
        let res = apply_ode(&oracle.ode(), &f);
        let fstar = res.substitute_alpha(ALPHA).unwrap();
        let tf = eigen_roots(&fstar);
        let expected = if filter {
            reference_filter(tf.clone(), &eigen_roots(&res.at_alpha_zero().to_float()))
        } else {
            tf.clone()
        };
        let points: Vec<_> = report.points.iter().filter(|p| p.grade == degree).collect();
        let all: Vec<Complex64> = points.iter().map(|p| p.t).collect();
        let survivors: Vec<Complex64> = points.iter().filter(|p| p.survivor).map(|p| p.t).collect();
        same_multiset(&all, &tf, 1e-6)
            .unwrap_or_else(|e| panic!("{oracle} degree {degree} roots: {e}"));
        same_multiset(&survivors, &expected, 1e-6).unwrap_or_else(|e| {
            panic!(
                "{oracle} degree {degree} survivors: {e}\n  F* roots {tf:?}\n  P = {}",
                res.at_alpha_zero()
            )
        });
        for p in &points {
            let v = f.eval_f64(p.t);
            assert!(
                (p.value - v).norm() <= 1e-9 * v.norm().max(1.0),
                "{oracle} degree {degree} value"
            );
        }
    }
}

#[test]
fn exp_matches_reference_route() {
    check(Oracle::Exp, false, 16);
}

#[test]
fn sin_filtered_matches_reference_route() {
    check(Oracle::Sin, true, 16);
}

#[test]
fn exp_nest_filtered_matches_reference_route() {
    check(Oracle::ExpNest, true, 12);
}

#[test]
fn ln1p_matches_reference_route() {
    check(Oracle::Ln1p, false, 16);
}

#[test]
fn reference_filter_drops_nearest() {
    let tf = vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(3.0, 0.0),
    ];
    let out = reference_filter(tf, &[Complex64::new(2.9, 0.0), Complex64::new(0.0, 0.0)]);
    same_multiset(
        &out,
        &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        0.0,
    )
    .unwrap();
}
