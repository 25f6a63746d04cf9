//! Farthest-first traversal: each pick maximizes the minimum tree distance
//! to all previous picks. Afterwards every vertex lies within the last
//! step value of some pick.

use augtree::index::StaticTreeIndex;
use augtree::instance::{gen_random, RandomFamily};
use augtree::solvers::gonzalez;

fn main() {
    let instance = gen_random(500, 1, 123, RandomFamily::RandomL1).expect("valid parameters");
    let run = gonzalez(&instance.tree, 8, 0).expect("h within range");
    for (i, (&p, &v)) in run.picks.iter().zip(&run.step_values).enumerate() {
        println!("pick {i}: vertex {p:4} at max-min distance {v}");
    }

    // Spread property: the picks' minimum pairwise distance covers the tree.
    let spread = *run.step_values.last().unwrap();
    let idx = StaticTreeIndex::build(&instance.tree);
    let worst = (0..instance.tree.n())
        .map(|v| run.picks.iter().map(|&p| idx.dist_hops(p, v).0).min().unwrap())
        .max()
        .unwrap();
    println!("min pairwise pick distance D = {spread}, max vertex-to-picks distance = {worst}");
    assert!(worst <= spread);
}
