//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Set `CIRCUITLAB_ACCEPTANCE_VERBOSE=1` to print every check.

use std::process::ExitCode;
use std::time::Instant;

use circuitlab::verify::{run_suite, VerifyOptions};

const CRITERIA: &[(usize, &str, &[&str])] = &[
    (
        1,
        "matching polytope circuit diameters for n = 2..5",
        &["matching-small"],
    ),
    (
        2,
        "matching polytope n = 6: distance 3 and 3-walks for all pairs",
        &["matching-6"],
    ),
    (
        3,
        "matching polytope n = 7: two-step walks for all pairs",
        &["matching-7"],
    ),
    (
        4,
        "perfect matching polytope n = 4, 6, 8, 10",
        &["permatch"],
    ),
    (5, "TSP polytope n = 5, 6, 7", &["tsp-5", "tsp-6", "tsp-7"]),
    (
        6,
        "fractional stable set circuit characterization",
        &["fstab-oracle"],
    ),
    (
        7,
        "fractional stable set walks of length 4 ecc + 16",
        &["fstab-walks"],
    ),
    (
        8,
        "sign-definite circuits are unit vectors",
        &["nonneg-circuits"],
    ),
    (
        9,
        "maximal circuit steps land on the boundary",
        &["walk-invariants"],
    ),
];

fn main() -> ExitCode {
    // perfect matchings of K10 are sampled; every other check is exhaustive
    let sampled = VerifyOptions {
        sample: Some(20_000),
        seed: 0,
        ..VerifyOptions::default()
    };
    let exhaustive = VerifyOptions::default();
    let verbose = std::env::var_os("CIRCUITLAB_ACCEPTANCE_VERBOSE").is_some();
    let mut all = true;
    for &(k, title, suites) in CRITERIA {
        let start = Instant::now();
        let mut pass = true;
        let mut failed = Vec::new();
        for s in suites {
            let opts = if *s == "permatch" {
                &sampled
            } else {
                &exhaustive
            };
            match run_suite(s, opts) {
                Ok(r) => {
                    if verbose {
                        print!("{}", r.to_text());
                    }
                    for c in r.checks.iter().filter(|c| !c.pass) {
                        failed.push(format!(
                            "{s}: {} (expected {}, observed {})",
                            c.description, c.expected, c.observed
                        ));
                    }
                    pass &= r.pass;
                }
                Err(e) => {
                    failed.push(format!("{s}: {e}"));
                    pass = false;
                }
            }
        }
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {k}: {} - {title} ({secs:.1} s)",
            if pass { "PASS" } else { "FAIL" }
        );
        for f in &failed {
            println!("    {f}");
        }
        all &= pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
