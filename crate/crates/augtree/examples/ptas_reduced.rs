//! The (1+eps) scheme step by step: reduce to a small vertex set (branch
//! vertices plus farthest-first picks), split tree edges to allow parallel
//! shortcuts, solve exactly, lift back, and compare with the true optimum.

use augtree::diameter::graph_diameter;
use augtree::instance::{gen_random, RandomFamily};
use augtree::solvers::{build_reduced, exact_doat, ptas, split_generalized, ExactOptions, DEFAULT_WORK_BUDGET};

fn main() {
    let instance = gen_random(256, 1, 99, RandomFamily::RandomL1).expect("valid parameters");
    let eps = 0.5;

    let red = build_reduced(&instance, eps).expect("eta within range");
    println!(
        "reduced instance: eta = {}, |V'| = {}, branch vertices = {}, leaves = {}, size precondition holds: {}",
        red.stats.eta,
        red.tree.n(),
        red.stats.branch_count,
        red.stats.leaf_count,
        red.stats.eq1_holds
    );

    let (split, _) = split_generalized(&red).expect("no overflow");
    println!("split instance: {} vertices after one split per reduced edge", split.tree.n());

    let res = ptas(&instance, eps, DEFAULT_WORK_BUDGET).expect("within work budget");
    println!("ptas shortcuts {:?} achieving diameter {}", res.shortcuts.edges(), res.diam);
    assert_eq!(res.diam, graph_diameter(&instance.tree, res.shortcuts.edges()).value);

    let exact = exact_doat(&instance, &ExactOptions::default()).expect("within work budget");
    println!(
        "measured ratio {:.3} (certified only when the size precondition holds)",
        res.diam as f64 / exact.diam as f64
    );
}
