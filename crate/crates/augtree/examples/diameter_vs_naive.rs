//! Exact diameter of a tree plus shortcuts: the fast farthest-structure
//! algorithm against the all-pairs Dijkstra oracle.

use augtree::diameter::{graph_diameter, naive_diameter};
use augtree::instance::{gen_random, RandomFamily, ShortcutSet};

fn main() {
    let instance = gen_random(60, 3, 42, RandomFamily::RandomL1).expect("valid parameters");
    let pairs = [(0, 37), (11, 52), (4, 29)];
    let shortcuts = ShortcutSet::from_pairs(&instance, &pairs).expect("distinct pairs");

    let fast = graph_diameter(&instance.tree, shortcuts.edges());
    let slow = naive_diameter(&instance.tree, shortcuts.edges());

    println!("fast  diameter = {} witness {:?}", fast.value, fast.witness);
    println!("naive diameter = {} witness {:?}", slow.value, slow.witness);
    assert_eq!(fast.value, slow.value);

    let bare = graph_diameter(&instance.tree, &[]);
    println!("without shortcuts = {}", bare.value);
}
