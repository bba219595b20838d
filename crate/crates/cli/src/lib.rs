//! Serialization and plotting for the `insola` command-line tool.

pub mod points;
pub mod svg;

use insola::finder::Oracle;
use num_complex::Complex64;

/// Relative tolerance under which a root counts as real.
pub const REAL_TOL: f64 = 1e-9;

pub fn is_real(t: Complex64) -> bool {
    t.im.abs() <= REAL_TOL * t.norm().max(1.0)
}

/// Closed-form reference value, `None` where it is not finite.
pub fn reference_value(oracle: Oracle, t: Complex64) -> Option<Complex64> {
    let v = oracle.eval(t);
    (v.re.is_finite() && v.im.is_finite()).then_some(v)
}
