//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kframe::selftest::{run_criterion, CRITERIA};

const SEED: u64 = 42;

/// Wall-clock budgets for the timed criteria.
fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        4 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

/// Exit status and stdout of `kframe selftest --seed 42`.
fn selftest_output() -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_kframe"))
        .args(["selftest", "--seed", &SEED.to_string()])
        .output()
        .expect("kframe binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, name) in CRITERIA {
        let start = Instant::now();
        let outcome = run_criterion(id, SEED).expect("criterion exists");
        let elapsed = start.elapsed();
        let in_time = budget(id).is_none_or(|b| elapsed < b);
        let ok = outcome.passed() && in_time;
        failed += usize::from(!ok);
        let mut line = format!(
            "criterion {id} {name}: {} cases={} failures={} time={:.2}s",
            if ok { "PASS" } else { "FAIL" },
            outcome.cases,
            outcome.failures,
            elapsed.as_secs_f64()
        );
        if let Some(b) = budget(id) {
            line.push_str(&format!(" budget={}s", b.as_secs()));
        }
        if let Some(f) = &outcome.first_failure {
            line.push_str(&format!(" first_failure={f}"));
        }
        println!("{line}");
    }

    let first = selftest_output();
    let second = selftest_output();
    let deterministic = first.0 == 0 && first == second;
    failed += usize::from(!deterministic);
    println!("criterion 9 determinism: {} bytes={}", if deterministic { "PASS" } else { "FAIL" }, first.1.len());

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
