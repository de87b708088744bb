//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use heatrace_cli::tolerances::Tolerances;
use heatrace_cli::verify::{self, Check, Status};
use heatrace_cli::CoefficientTable;
use heatrace_core::CoefficientEngine;

struct Outcome {
    ok: bool,
    summary: String,
    notes: Vec<String>,
}

type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

fn from_checks(checks: Vec<Check>, elapsed: Duration, budget: Option<Duration>) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| c.status == Status::Fail).collect();
    let in_time = budget.map_or(true, |b| elapsed < b);
    let mut notes: Vec<String> =
        failed.iter().map(|c| format!("failed {}/{}: {}", c.suite, c.name, c.detail)).collect();
    notes.extend(checks.iter().filter(|c| c.status == Status::Info).map(|c| format!("note {}: {}", c.name, c.detail)));
    if !in_time {
        notes.push(format!("runtime {:.2} s exceeds {:.0} s", elapsed.as_secs_f64(), budget.unwrap().as_secs_f64()));
    }
    let passed = checks.iter().filter(|c| c.status == Status::Pass).count();
    Outcome {
        ok: failed.is_empty() && in_time && passed > 0,
        summary: format!("{passed} checks passed, {} failed, {:.2} s", failed.len(), elapsed.as_secs_f64()),
        notes,
    }
}

fn timed(budget: Option<u64>, f: impl FnOnce() -> Vec<Check>) -> Outcome {
    let start = Instant::now();
    let checks = f();
    from_checks(checks, start.elapsed(), budget.map(Duration::from_secs))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("report{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_heatrace"))
            .args(["verify", "--numeric", "--output", path.to_str().unwrap()])
            .status()
            .expect("verify runs");
        reports.push((status.code(), std::fs::read(&path).unwrap_or_default()));
    }
    let same = reports[0].1 == reports[1].1 && !reports[0].1.is_empty();
    let ok = same && reports.iter().all(|r| r.0 == Some(0));
    Outcome {
        ok,
        summary: format!(
            "two numeric reports of {} bytes, identical: {same}, exit codes {:?}/{:?}",
            reports[0].1.len(),
            reports[0].0,
            reports[1].0
        ),
        notes: Vec::new(),
    }
}

fn main() {
    let tol = Tolerances::default();
    let engine = CoefficientEngine::default();
    let table = CoefficientTable::reference();
    let criteria: Vec<Criterion> = vec![
        ("coefficient table", Box::new(|| timed(Some(5), || verify::coefficient_table(&CoefficientEngine::default(), &table)))),
        ("gradient-level identity", Box::new(|| timed(None, || verify::gradient_identity(&engine)))),
        ("oracle equivalence", Box::new(|| timed(Some(10), verify::oracle_equivalence))),
        ("parity and mirror sweep", Box::new(|| timed(None, || verify::parity_mirror(&engine)))),
        ("assembled invariants", Box::new(|| timed(None, || verify::invariants(&engine)))),
        ("torus coefficient recovery", Box::new(|| timed(Some(120), || verify::torus_fit(&tol)))),
        ("Duhamel bounds", Box::new(|| timed(None, || verify::duhamel_bound(&tol)))),
        ("boundary insensitivity", Box::new(|| timed(Some(120), || verify::boundary_insensitivity(&tol)))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let o = run();
        failures += usize::from(!o.ok);
        println!("{} {}. {name}: {}", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.summary);
        for n in o.notes {
            println!("      {n}");
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
