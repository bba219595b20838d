//! All complex roots of a [`FloatPoly`] by Aberth–Ehrlich iteration.
//!
//! Starting points are placed on circles whose radii come from the upper
//! convex hull of `(k, log|c_k|)` (the Newton polygon), which keeps the
//! iteration well behaved when coefficients span many orders of magnitude,
//! as they do for high-degree Taylor residuals. Exact zero roots are split
//! off before iterating.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::FloatPoly;

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("polynomial has non-finite coefficients")]
    NonFinite,
    #[error("root iteration did not converge after {iterations} sweeps (worst scaled residual {worst_residual:e})")]
    NonConvergentRoots {
        worst_residual: f64,
        iterations: usize,
    },
}

/// `|p(r)| / max_k |c_k| max(1, |r|)^k`, evaluated without overflow.
pub fn scaled_residual(p: &FloatPoly, r: Complex64) -> f64 {
    let c = p.coeffs();
    let Some(n) = p.degree() else {
        return 0.0;
    };
    let s = r.norm().max(1.0);
    let t = r / s;
    let h = 1.0 / s;
    // Homogeneous Horner for p(r) / s^n and the matching bound.
    let mut acc = c[n];
    let mut hp = 1.0;
    let mut bound = c[n].norm();
    for k in (0..n).rev() {
        hp *= h;
        acc = acc * t + c[k] * hp;
        bound = bound.max(c[k].norm() * hp);
    }
    if bound == 0.0 {
        return 0.0;
    }
    acc.norm() / bound
}

/// Every root of `p`, repeated by multiplicity. Each returned root `r`
/// satisfies `|p(r)| <= root_tol * max_k |c_k| max(1, |r|)^k`.
pub fn roots_complex(p: &FloatPoly, root_tol: f64) -> Result<Vec<Complex64>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if p.coeffs()
        .iter()
        .any(|c| !(c.re.is_finite() && c.im.is_finite()))
    {
        return Err(RootError::NonFinite);
    }
    let c = p.coeffs();
    let zeros = c.iter().take_while(|c| c.is_zero()).count();
    let q: Vec<Complex64> = c[zeros..].to_vec();
    let mut roots = vec![Complex64::zero(); zeros];
    let m = q.len() - 1;
    match m {
        0 => return Ok(roots),
        1 => {
            roots.push(-q[0] / q[1]);
            return Ok(roots);
        }
        _ => {}
    }

    let mut z = initial_guesses(&q);
    let mut done = vec![false; m];
    let tiny = 4.0 * (m as f64 + 1.0) * f64::EPSILON;
    let mut sweeps = 0;
    while sweeps < MAX_ITERATIONS && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (newton, backward) = newton_step(&q, z[i]);
            if backward <= tiny || newton.is_zero() {
                done[i] = true;
                continue;
            }
            let mut sum = Complex64::zero();
            for j in 0..m {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        sum += d.inv();
                    }
                }
            }
            let w = newton / (Complex64::new(1.0, 0.0) - newton * sum);
            let next = z[i] - w;
            if next.re.is_finite() && next.im.is_finite() {
                if (next - z[i]).norm() <= f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
                z[i] = next;
            }
        }
    }

    let qp = FloatPoly::new(q.clone());
    for r in z.iter_mut() {
        if scaled_residual(&qp, *r) > root_tol {
            polish(&q, r);
        }
    }
    roots.extend(z);
    // The bound is stated for the caller's polynomial, zero factors included.
    let worst = roots
        .iter()
        .map(|r| scaled_residual(p, *r))
        .fold(0.0, f64::max);
    if worst > root_tol || worst.is_nan() {
        return Err(RootError::NonConvergentRoots {
            worst_residual: worst,
            iterations: sweeps,
        });
    }
    Ok(roots)
}

/// Newton correction `p/p'` and backward error `|p(z)| / Σ|c_k||z|^k`.
/// For `|z| > 1` the reversed polynomial in `1/z` is used to stay in range.
fn newton_step(q: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let m = q.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = q[m];
        let mut dp = Complex64::zero();
        let mut s = q[m].norm();
        let az = z.norm();
        for k in (0..m).rev() {
            dp = dp * z + p;
            p = p * z + q[k];
            s = s * az + q[k].norm();
        }
        let backward = if s == 0.0 { 0.0 } else { p.norm() / s };
        if dp.is_zero() {
            return (Complex64::zero(), backward);
        }
        (p / dp, backward)
    } else {
        let w = z.inv();
        let aw = w.norm();
        // r(w) = Σ q[m-k] w^k
        let mut r = q[0];
        let mut dr = Complex64::zero();
        let mut s = q[0].norm();
        for &c in &q[1..=m] {
            dr = dr * w + r;
            r = r * w + c;
            s = s * aw + c.norm();
        }
        let backward = if s == 0.0 { 0.0 } else { r.norm() / s };
        // p/p' = z / (m - w r'(w) / r(w))
        let denom = Complex64::new(m as f64, 0.0) - w * dr / r;
        if r.is_zero() || denom.is_zero() {
            return (Complex64::zero(), backward);
        }
        (z / denom, backward)
    }
}

fn polish(q: &[Complex64], r: &mut Complex64) {
    for _ in 0..8 {
        let (step, _) = newton_step(q, *r);
        let next = *r - step;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return;
        }
        *r = next;
        if step.norm() <= f64::EPSILON * r.norm() {
            return;
        }
    }
}

/// Circles from the Newton polygon of `q` (degree `m >= 2`, `q[0] != 0`).
fn initial_guesses(q: &[Complex64]) -> Vec<Complex64> {
    let m = q.len() - 1;
    let pts: Vec<(usize, f64)> = q
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b when it lies on or below the chord a -> p.
            let cross =
                (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    const SIGMA: f64 = 0.7;
    let mut z = Vec::with_capacity(m);
    for seg in hull.windows(2) {
        let (i, li) = seg[0];
        let (j, lj) = seg[1];
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp();
        for t in 0..count {
            let angle = TAU * t as f64 / count as f64 + TAU * i as f64 / m as f64 + SIGMA;
            z.push(Complex64::from_polar(radius, angle));
        }
    }
    z
}
