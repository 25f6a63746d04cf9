//! Driving the farthest structure directly: mark terminals, assign offsets,
//! query for the vertex maximizing the offset distance to the nearest
//! terminal, and roll everything back.

use augtree::farthest::{brute, FarthestStructure};
use augtree::instance::{gen_random, RandomFamily};
use augtree::tree::binarize;

fn main() {
    let instance = gen_random(200, 1, 7, RandomFamily::RandomL1).expect("valid parameters");
    let bin = binarize(&instance.tree);
    let mut fs = FarthestStructure::new(&bin.tree).expect("binarized tree is binary");

    let cp = fs.checkpoint();
    for (v, alpha) in [(3usize, 100u64), (77, 0), (154, 2500)] {
        fs.make_terminal(v).expect("fresh terminal");
        fs.set_alpha(v, alpha).expect("terminal");
    }
    println!("shrunk tree: {:?}", fs.shrink());

    let report = fs.report_farthest().expect("terminals present");
    println!(
        "farthest value {} via terminal {} at witness {}",
        report.value, report.terminal, report.witness
    );

    let oracle = brute::report_farthest(&bin.tree, &[(3, 100), (77, 0), (154, 2500)]);
    assert_eq!(report, oracle);

    fs.rollback(cp).expect("balanced checkpoint");
    assert_eq!(fs.terminal_count(), 0);
    println!("rolled back to the empty terminal set");
}
