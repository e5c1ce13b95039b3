//! Full-scale acceptance run: one PASS/FAIL line per criterion, with the
//! underlying check lines echoed below it.

use std::time::Instant;

use choicelab::suites::{run_suite, CheckLine, Suite, SuiteConfig};

/// Criterion label, suite, and the check lines that make it up.
const CRITERIA: [(&str, Suite, &[&str]); 7] = [
    ("exact choice numbers by exhaustive search", Suite::Oracle, &["exact-choice-numbers"]),
    ("pruned exhaustive verification of K_{3,2,2} and K_{3,3,2}", Suite::Enumeration, &["pruned-exhaustive-verification"]),
    ("lower-bound witnesses for K_{3,3} and K_{4,2*3}", Suite::Oracle, &["lower-bound-witnesses"]),
    (
        "strategy replay on random canonical assignments",
        Suite::Strategy,
        &["three-triples-replay", "quad-two-triples-replay", "pair-selection-totality", "conditioned-replay"],
    ),
    ("reduction suite against subset oracles", Suite::Lemmas, &["reduction-lemmas"]),
    ("catalog agrees with exhaustive choice numbers", Suite::Oracle, &["catalog-agreement"]),
    ("symmetry pruning matches naive enumeration", Suite::Enumeration, &["enumeration-soundness"]),
];

fn main() {
    let cfg = SuiteConfig::default();
    let mut lines: Vec<CheckLine> = Vec::new();
    let mut timings = Vec::new();
    for suite in Suite::ALL {
        let t = Instant::now();
        let out = run_suite(suite, &cfg).unwrap_or_else(|e| panic!("suite {suite} errored: {e}"));
        timings.push(format!("{suite} {:.1}s", t.elapsed().as_secs_f64()));
        lines.extend(out);
    }

    let mut failed = Vec::new();
    for (i, (label, suite, names)) in CRITERIA.iter().enumerate() {
        let parts: Vec<&CheckLine> = names
            .iter()
            .map(|n| lines.iter().find(|l| l.name == *n).unwrap_or_else(|| panic!("{suite} has no check {n}")))
            .collect();
        let passed = parts.iter().all(|l| l.passed);
        println!("{} criterion {}: {label}", if passed { "PASS" } else { "FAIL" }, i + 1);
        for l in parts {
            println!("    {l}");
        }
        if !passed {
            failed.push(i + 1);
        }
    }
    println!("suite times: {}", timings.join(", "));
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
