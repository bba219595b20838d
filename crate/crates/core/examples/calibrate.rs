//! Measures how closely insola survivors follow the closed-form solutions of
//! the four built-in plotting problems and freezes tolerances for the acceptance tests.
//!
//! ```text
//! cargo run --release -p insola --example calibrate [-- --write]
//! ```

use std::collections::BTreeMap;
use std::time::Instant;

use insola::finder::Oracle;
use insola::insola::{run_insola, InsolaConfig};
use num_complex::Complex64;
use serde::Serialize;

/// A root counts as real when `|Im t| <= REAL_TOL * max(1, |t|)`.
const REAL_TOL: f64 = 1e-9;

const FIXTURE: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/fixtures/insola_tolerances.toml"
);

#[derive(Serialize)]
struct Entry {
    filter: bool,
    /// Survivors inside the unit disk, plus real ones anywhere when `real_axis`.
    region: &'static str,
    survivors: usize,
    observed: f64,
    tol: f64,
}

/// Twice the observed error, rounded up to one significant digit.
fn freeze(observed: f64) -> f64 {
    let v = (2.0 * observed).max(1e-15);
    let scale = 10f64.powf(v.log10().floor());
    (v / scale).ceil() * scale
}

fn main() {
    let write = std::env::args().any(|a| a == "--write");
    // For sin, real roots are compared against the curve over the whole
    // axis, so its region includes them.
    let problems = [
        (Oracle::Exp, false, false),
        (Oracle::Ln1p, false, false),
        (Oracle::Sin, true, true),
        (Oracle::ExpNest, true, false),
    ];
    let mut out = BTreeMap::new();
    for (oracle, filter, real_axis) in problems {
        let mut cfg = InsolaConfig::oracle(oracle);
        cfg.filter = filter;
        let start = Instant::now();
        let report = run_insola(&cfg).expect("valid configuration");
        let elapsed = start.elapsed();
        let mut observed: f64 = 0.0;
        let mut count = 0;
        let in_region = |t: Complex64| {
            t.norm() <= 1.0 || (real_axis && t.im.abs() <= REAL_TOL * t.norm().max(1.0))
        };
        for p in report.survivors().filter(|p| in_region(p.t)) {
            count += 1;
            observed = observed.max((p.value - oracle.eval(p.t)).norm());
        }
        println!(
            "{:<10} points {:>4}  survivors in region {:>4}  max err {:.3e}  failures {}  {:.2?}",
            oracle.name(),
            report.points.len(),
            count,
            observed,
            report.failures.len(),
            elapsed
        );
        for f in &report.failures {
            println!("    degree {}: {}", f.degree, f.error);
        }
        out.insert(
            oracle.name().to_string(),
            Entry {
                filter,
                region: if real_axis {
                    "unit_disk+real_axis"
                } else {
                    "unit_disk"
                },
                survivors: count,
                observed,
                tol: freeze(observed),
            },
        );
    }
    let body = toml::to_string(&out).expect("serializable");
    let text = format!(
        "# Written by `cargo run --release -p insola --example calibrate -- --write`.\n\
         # alpha* = 1e-3, degrees 1..=39. observed = max |f(t*) - g(t*)| over survivors\n\
         # in the region (|t*| <= 1, plus real t* anywhere for unit_disk+real_axis),\n\
         # g the closed-form solution; tol = 2 * observed, rounded up to one\n\
         # significant digit.\n\n{body}"
    );
    if write {
        std::fs::write(FIXTURE, text).expect("fixture directory exists");
        println!("wrote {FIXTURE}");
    } else {
        print!("{text}");
    }
}
