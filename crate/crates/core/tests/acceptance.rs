//! Runs every acceptance suite at full size and prints one line per
//! criterion. Suites with a wall-clock budget fail when they exceed it.

use std::time::Duration;

use fh_core::suites::{run_suite, SuiteConfig, SUITES};

fn budget(name: &str) -> Option<Duration> {
    let secs = match name {
        "base" => 10,
        "lift" => 60,
        "submodularity" => 30,
        "pregeometry" => 60,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn main() {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for &name in SUITES {
        let rep = run_suite(name, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        let over = budget(name).is_some_and(|b| rep.elapsed > b);
        if over {
            println!("FAIL {name} over budget: {:.2}s", rep.elapsed.as_secs_f64());
        } else {
            println!("{}", rep.line());
        }
        if let Some(c) = &rep.counterexample {
            println!("  counterexample: {c}");
        }
        if over || !rep.passed() {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
