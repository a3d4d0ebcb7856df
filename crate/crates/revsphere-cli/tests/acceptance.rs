//! Release gate: the numerical claims this workspace is built around,
//! re-run at full scale with one verdict line per criterion. Wall-clock
//! budgets apply where response time is part of the claim.
//!
//! Runs as a plain binary (no libtest harness) so the verdict lines
//! always reach the terminal, pass or fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use revsphere::verify::{run_named, VerifyConfig};

fn report(index: usize, passed: bool, name: &str, detail: &str, failures: &mut u32) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {index:02} {verdict} {name}: {detail}");
    if !passed {
        *failures += 1;
    }
}

/// Runs one named check at full scale; a budget in seconds, where given,
/// is part of the criterion.
fn named(cfg: &VerifyConfig, index: usize, name: &str, budget: Option<f64>, failures: &mut u32) {
    let start = Instant::now();
    let check = run_named(cfg, name).expect("check name is known");
    let elapsed = start.elapsed().as_secs_f64();
    let mut passed = check.passed;
    let mut clock = format!("{elapsed:.2}s");
    if let Some(limit) = budget {
        clock.push_str(&format!(" of {limit:.0}s budget"));
        passed &= elapsed <= limit;
    }
    let detail = format!("{} [margin {:+.3e}, {clock}]", check.details, check.margin);
    report(index, passed, name, &detail, failures);
}

fn main() -> ExitCode {
    println!("acceptance gate: full-scale configuration");
    let cfg = VerifyConfig::full();
    let mut failures = 0;

    named(&cfg, 1, "half-period-round-sphere", Some(1.0), &mut failures);
    named(&cfg, 2, "half-period-decreasing", Some(10.0), &mut failures);
    named(&cfg, 3, "a-function-closed-forms", None, &mut failures);
    named(&cfg, 4, "curvature-minimum-location", None, &mut failures);
    named(&cfg, 5, "sine-multiple-bound", None, &mut failures);
    named(&cfg, 6, "derivative-sups-past-threshold", None, &mut failures);
    named(&cfg, 7, "curvature-derivative-vs-finite-difference", None, &mut failures);
    named(&cfg, 8, "third-derivative-node-values", None, &mut failures);
    named(&cfg, 9, "curvature-derivative-alternation", None, &mut failures);
    named(&cfg, 10, "extrema-count-growth", None, &mut failures);
    named(&cfg, 11, "cut-locus-on-antipodal-parallel", Some(120.0), &mut failures);
    named(&cfg, 12, "geodesic-shooting-integrity", None, &mut failures);

    // Determinism of the shipped binary: identical flags, identical bytes.
    let args = ["verify", "--scale", "quick"];
    let rerun = || {
        Command::new(env!("CARGO_BIN_EXE_revsphere"))
            .args(args)
            .output()
            .expect("verify binary runs")
    };
    let first = rerun();
    let second = rerun();
    let passed = !first.stdout.is_empty()
        && first.stdout == second.stdout
        && first.status == second.status;
    let detail = format!(
        "two `revsphere verify --scale quick` runs, {} bytes each, exit {:?}",
        first.stdout.len(),
        first.status.code()
    );
    report(13, passed, "verify-output-determinism", &detail, &mut failures);

    if failures == 0 {
        println!("acceptance gate: all 13 criteria hold");
        ExitCode::SUCCESS
    } else {
        println!("acceptance gate: {failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
