//! The star 4-approximation against the exact optimum on a small metric
//! instance, with the oracle query counts of both.

use augtree::instance::{gen_random, RandomFamily};
use augtree::solvers::{approx4, exact_doat, ExactOptions};

fn main() {
    let instance = gen_random(40, 2, 5, RandomFamily::RandomL1).expect("valid parameters");

    let star = approx4(&instance).expect("metric instance");
    println!(
        "star4: diam {} with {:?} ({} oracle queries, {:.1} ms)",
        star.diam,
        star.shortcuts.edges(),
        star.oracle_queries,
        star.elapsed_ms
    );

    let exact = exact_doat(&instance, &ExactOptions::default()).expect("within work budget");
    println!(
        "exact: diam {} with {:?} ({} oracle queries, {:.1} ms)",
        exact.diam,
        exact.shortcuts.edges(),
        exact.oracle_queries,
        exact.elapsed_ms
    );

    let ratio = star.diam as f64 / exact.diam as f64;
    println!("approximation ratio {ratio:.3}");
    assert!(ratio <= 4.0 + 1e-9);
}
