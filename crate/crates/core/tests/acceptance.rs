//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion.
//!
//! A few sub-checks fail because the stated figure disagrees with what both
//! brute force and the classification lists produce. Those are listed in
//! KNOWN_FAILURES; the test fails if any other check fails, or if one of
//! these starts passing.

use std::collections::BTreeSet;

use affine_fusion::verify::{run_suite, SuiteConfig};

const KNOWN_FAILURES: &[&str] = &[
    // pi[1] is the identity at these levels, so there is one fewer
    // distinct permutation than parameter values.
    "count:A1k2",
    "count:E7k2",
    // pi[2] coincides with C at k = 2.
    "count:A2k2",
    // The off-diagonal simple-current matrices give 48, not 24.
    "count:D4k2",
    // Lambda_star is not of minimal q-dimension at these small levels.
    "minimal:B3k3",
    "minimal:E6k2",
    "minimal:E8k3",
    "minimal:F4k2",
    "minimal:G2k2",
];

// Runs without the libtest harness so the per-criterion lines are always
// shown, captured output or not.
fn main() {
    let reports = run_suite(SuiteConfig::default(), |r| {
        println!("{}", r.summary_line());
        for f in r.failures() {
            println!("    {}: {}", f.key, f.detail);
        }
    });
    assert_eq!(reports.len(), 9);
    let failing: BTreeSet<&str> = reports.iter().flat_map(|r| r.failures()).map(|c| c.key.as_str()).collect();
    let known: BTreeSet<&str> = KNOWN_FAILURES.iter().copied().collect();
    if failing != known {
        eprintln!("failing checks differ from the documented set");
        eprintln!("  unexpected failures: {:?}", failing.difference(&known).collect::<Vec<_>>());
        eprintln!("  now passing: {:?}", known.difference(&failing).collect::<Vec<_>>());
        std::process::exit(1);
    }
    println!("acceptance: failing checks match the documented set ({} known)", known.len());
}
