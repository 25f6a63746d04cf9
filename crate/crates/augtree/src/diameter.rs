//! Exact diameter of a tree plus k shortcuts.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::farthest::{FarthestStructure, ShrunkTree};
use crate::instance::Shortcut;
use crate::tree::{binarize, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiameterResult {
    pub value: u64,
    pub witness: (usize, usize),
}

/// Condensed multigraph on the shrunk-tree vertices: shrunk edges weighted by
/// tree distance plus all shortcuts. Preserves source-to-terminal distances
/// of the full augmented tree.
#[derive(Debug, Clone)]
pub struct CondensedGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize, u64)>,
}

impl CondensedGraph {
    pub fn from_shrunk(shrunk: &ShrunkTree, shortcuts: &[Shortcut]) -> Self {
        let vertices: Vec<usize> = shrunk.vertices.iter().map(|&(v, _)| v).collect();
        let mut edges: Vec<(usize, usize, u64)> =
            shrunk.edges.iter().map(|e| (e.parent, e.child, e.cost)).collect();
        for s in shortcuts {
            edges.push((s.u, s.v, s.cost));
        }
        CondensedGraph { vertices, edges }
    }

    /// Dijkstra over the condensed graph. Every vertex is reachable because
    /// the shrunk edges alone connect it.
    pub fn distances_from(&self, s: usize) -> Vec<(usize, u64)> {
        let slot: HashMap<usize, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj: Vec<Vec<(u32, u64)>> = vec![Vec::new(); self.vertices.len()];
        for &(u, v, w) in &self.edges {
            let (iu, iv) = (slot[&u], slot[&v]);
            adj[iu].push((iv as u32, w));
            adj[iv].push((iu as u32, w));
        }
        let mut dist = vec![u64::MAX; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        dist[slot[&s]] = 0;
        heap.push(Reverse((0u64, slot[&s] as u32)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for &(v, w) in &adj[u as usize] {
                if d + w < dist[v as usize] {
                    dist[v as usize] = d + w;
                    heap.push(Reverse((d + w, v)));
                }
            }
        }
        self.vertices.iter().zip(dist).map(|(&v, d)| (v, d)).collect()
    }
}

/// Eccentricity of `s` in the tree plus shortcuts, computed through the
/// farthest structure: mark `s` and all shortcut endpoints, solve the
/// condensed graph, propagate the distances, query, roll back.
pub fn ecc_from_source(fs: &mut FarthestStructure, shortcuts: &[Shortcut], s: usize) -> Result<u64> {
    fs.ecc_of_source(s, shortcuts).map(|(v, _)| v)
}

fn far_from(tree: &Tree, src: usize) -> (usize, u64) {
    // Farthest by (cost, hops, id); deterministic under zero-cost edges.
    let mut best = (0u64, 0u32, src);
    let mut stack = vec![(src, src, 0u64, 0u32)];
    while let Some((u, from, cost, hops)) = stack.pop() {
        best = best.max((cost, hops, u));
        for &(v, w) in tree.neighbors(u) {
            if v != from {
                stack.push((v, u, cost + w, hops + 1));
            }
        }
    }
    (best.2, best.0)
}

/// Classical two-sweep tree diameter, used when there are no shortcuts.
pub fn tree_diameter(tree: &Tree) -> DiameterResult {
    if tree.n() == 1 {
        return DiameterResult { value: 0, witness: (0, 0) };
    }
    let (a, _) = far_from(tree, 0);
    let (b, d) = far_from(tree, a);
    DiameterResult { value: d, witness: (a, b) }
}

/// Exact diameter of `tree + shortcuts` with a witness pair. Handles
/// non-metric costs and zero-cost edges; an empty shortcut set falls back to
/// the two-sweep tree algorithm.
pub fn graph_diameter(tree: &Tree, shortcuts: &[Shortcut]) -> DiameterResult {
    graph_diameter_with_threads(tree, shortcuts, 1)
}

/// As [`graph_diameter`], optionally sharding sources across a thread pool.
/// Each worker owns an independent clone of the farthest structure.
pub fn graph_diameter_with_threads(
    tree: &Tree,
    shortcuts: &[Shortcut],
    threads: usize,
) -> DiameterResult {
    if shortcuts.is_empty() {
        return tree_diameter(tree);
    }
    for s in shortcuts {
        assert!(s.u < tree.n() && s.v < tree.n() && s.u != s.v, "invalid shortcut");
    }
    let bin = binarize(tree);
    let mut fs = FarthestStructure::new(&bin.tree).expect("binarized tree is binary");
    // The shortcut endpoints are terminals for every source; mark them once.
    let mut endpoints: Vec<usize> = shortcuts.iter().flat_map(|s| [s.u, s.v]).collect();
    endpoints.sort_unstable();
    endpoints.dedup();
    for &v in &endpoints {
        fs.make_terminal(v).expect("distinct endpoints");
    }
    let fs = fs;
    let better = |a: (u64, usize, usize), b: (u64, usize, usize)| -> (u64, usize, usize) {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let eval = |fs: &mut FarthestStructure, s: usize| -> (u64, usize, usize) {
        let (value, witness) = fs.ecc_of_source(s, shortcuts).expect("valid source");
        (value, s, bin.anchor_of(witness))
    };
    let best = if threads <= 1 {
        let mut fs = fs;
        let mut best = (0u64, usize::MAX, 0usize);
        for s in 0..tree.n() {
            best = better(best, eval(&mut fs, s));
        }
        best
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..tree.n())
                .into_par_iter()
                .map_init(
                    || fs.clone(),
                    |fs, s| eval(fs, s),
                )
                .reduce(|| (0u64, usize::MAX, 0usize), |a, b| better(a, b))
        })
    };
    DiameterResult { value: best.0, witness: (best.1.min(tree.n() - 1), best.2) }
}

/// Exact diameter oracle: Dijkstra from every vertex over the explicit
/// augmented tree.
pub fn naive_diameter(tree: &Tree, shortcuts: &[Shortcut]) -> DiameterResult {
    let n = tree.n();
    let mut adj: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
    for &(u, v, w) in tree.edges() {
        adj[u].push((v as u32, w));
        adj[v].push((u as u32, w));
    }
    for s in shortcuts {
        adj[s.u].push((s.v as u32, s.cost));
        adj[s.v].push((s.u as u32, s.cost));
    }
    let mut best = DiameterResult { value: 0, witness: (0, 0) };
    let mut dist = vec![u64::MAX; n];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    for s in 0..n {
        dist.fill(u64::MAX);
        dist[s] = 0;
        heap.push(Reverse((0, s as u32)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for &(v, w) in &adj[u as usize] {
                if d + w < dist[v as usize] {
                    dist[v as usize] = d + w;
                    heap.push(Reverse((d + w, v)));
                }
            }
        }
        for v in 0..n {
            if dist[v] != u64::MAX && dist[v] > best.value {
                best = DiameterResult { value: dist[v], witness: (s, v) };
            }
        }
    }
    best
}

/// Exact diameter of a path plus shortcuts via per-source condensed Dijkstra
/// and a binary search per condensed segment.
pub fn path_diameter(tree: &Tree, shortcuts: &[Shortcut]) -> Result<u64> {
    if !tree.is_path() {
        return Err(Error::NotAPath);
    }
    let n = tree.n();
    if n == 1 {
        return Ok(0);
    }
    // Lay the path out left to right from the smaller endpoint.
    let start = (0..n).find(|&v| tree.degree(v) == 1).expect("path endpoint");
    let mut order = Vec::with_capacity(n);
    let mut pref = Vec::with_capacity(n);
    let mut prev = start;
    let mut cur = start;
    pref.push(0u64);
    order.push(start);
    loop {
        let next = tree.neighbors(cur).iter().find(|&&(v, _)| v != prev);
        match next {
            Some(&(v, w)) => {
                pref.push(pref.last().unwrap() + w);
                order.push(v);
                prev = cur;
                cur = v;
            }
            None => break,
        }
    }
    debug_assert_eq!(order.len(), n);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }

    let mut diam = 0u64;
    for s in 0..n {
        // Terminals: the source, both endpoints, all shortcut endpoints.
        let mut mpos: Vec<usize> = vec![pos[s], 0, n - 1];
        for sc in shortcuts {
            mpos.push(pos[sc.u]);
            mpos.push(pos[sc.v]);
        }
        mpos.sort_unstable();
        mpos.dedup();
        let h = mpos.len();
        let slot: HashMap<usize, usize> = mpos.iter().enumerate().map(|(i, &p)| (p, i)).collect();

        // Condensed Dijkstra from s.
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); h];
        for i in 0..h - 1 {
            let w = pref[mpos[i + 1]] - pref[mpos[i]];
            adj[i].push((i + 1, w));
            adj[i + 1].push((i, w));
        }
        for sc in shortcuts {
            let (a, b) = (slot[&pos[sc.u]], slot[&pos[sc.v]]);
            adj[a].push((b, sc.cost));
            adj[b].push((a, sc.cost));
        }
        let mut alpha = vec![u64::MAX; h];
        let mut heap = BinaryHeap::new();
        alpha[slot[&pos[s]]] = 0;
        heap.push(Reverse((0u64, slot[&pos[s]])));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > alpha[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                if d + w < alpha[v] {
                    alpha[v] = d + w;
                    heap.push(Reverse((d + w, v)));
                }
            }
        }

        // Per-segment eccentricity by binary search for the crossover.
        for i in 0..h - 1 {
            let (lp, rp) = (mpos[i], mpos[i + 1]);
            let cnt = rp - lp + 1;
            let l = |j: usize| alpha[i] + (pref[lp + j - 1] - pref[lp]);
            let r = |j: usize| alpha[i + 1] + (pref[rp] - pref[lp + j - 1]);
            #[cfg(debug_assertions)]
            if cnt <= 512 {
                for j in 2..=cnt {
                    debug_assert!(l(j) >= l(j - 1), "left distances must be non-decreasing");
                    debug_assert!(r(j) <= r(j - 1), "right distances must be non-increasing");
                }
            }
            let (mut lo, mut hi) = (2usize, cnt);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if l(mid) >= r(mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            diam = diam.max(l(lo - 1).max(r(lo)));
        }
    }
    Ok(diam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_random, RandomFamily, ShortcutSet};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
        let edges =
            (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0..100u64))).collect();
        Tree::new(n, edges).unwrap()
    }

    fn random_shortcuts(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Shortcut> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        while out.len() < k {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && seen.insert((u.min(v), u.max(v))) {
                out.push(Shortcut { u, v, cost: rng.random_range(0..150) });
            }
            if seen.len() >= n * (n - 1) / 2 {
                break;
            }
        }
        out
    }

    fn floyd_warshall_diameter(tree: &Tree, shortcuts: &[Shortcut]) -> u64 {
        let n = tree.n();
        let mut d = vec![vec![u64::MAX / 4; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        let mut relax = |u: usize, v: usize, w: u64| {
            if w < d[u][v] {
                d[u][v] = w;
                d[v][u] = w;
            }
        };
        for &(u, v, w) in tree.edges() {
            relax(u, v, w);
        }
        for s in shortcuts {
            relax(s.u, s.v, s.cost);
        }
        for m in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if d[u][m] + d[m][v] < d[u][v] {
                        d[u][v] = d[u][m] + d[m][v];
                    }
                }
            }
        }
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| d[u][v]).max().unwrap()
    }

    #[test]
    fn single_edge_no_shortcuts() {
        let t = Tree::new(2, vec![(0, 1, 5)]).unwrap();
        assert_eq!(naive_diameter(&t, &[]).value, 5);
        assert_eq!(graph_diameter(&t, &[]).value, 5);
    }

    #[test]
    fn zero_cost_shortcut_across_path() {
        // Triangle closed by a free edge: the diameter is the cheaper side.
        let t = Tree::new(3, vec![(0, 1, 5), (1, 2, 7)]).unwrap();
        let s = [Shortcut { u: 0, v: 2, cost: 0 }];
        assert_eq!(naive_diameter(&t, &s).value, 5);
        assert_eq!(graph_diameter(&t, &s).value, 5);
        assert_eq!(path_diameter(&t, &s).unwrap(), 5);

        let t = Tree::new(4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let s = [Shortcut { u: 0, v: 3, cost: 0 }];
        let want = naive_diameter(&t, &s).value;
        assert_eq!(want, 1);
        assert_eq!(graph_diameter(&t, &s).value, want);
        assert_eq!(path_diameter(&t, &s).unwrap(), want);
    }

    #[test]
    fn five_path_with_unit_shortcut() {
        let t = Tree::new(5, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)]).unwrap();
        let s = [Shortcut { u: 0, v: 4, cost: 1 }];
        assert_eq!(naive_diameter(&t, &s).value, 2);
        assert_eq!(path_diameter(&t, &s).unwrap(), 2);
        assert_eq!(graph_diameter(&t, &s).value, 2);
    }

    #[test]
    fn naive_matches_floyd_warshall() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(2..60);
            let t = random_tree(n, &mut rng);
            let s = random_shortcuts(n, rng.random_range(0..5), &mut rng);
            assert_eq!(naive_diameter(&t, &s).value, floyd_warshall_diameter(&t, &s));
        }
    }

    #[test]
    fn graph_diameter_matches_naive_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..120 {
            let n = rng.random_range(2..150);
            let t = random_tree(n, &mut rng);
            let s = random_shortcuts(n, rng.random_range(0..8), &mut rng);
            let naive = naive_diameter(&t, &s);
            let fast = graph_diameter(&t, &s);
            assert_eq!(fast.value, naive.value, "trial {trial} n {n}");
            // The witness pair must achieve the reported value.
            let (a, b) = fast.witness;
            let d = naive_one_pair_distance(&t, &s, a, b);
            assert_eq!(d, fast.value, "witness must achieve the diameter");
        }
    }

    fn naive_one_pair_distance(tree: &Tree, shortcuts: &[Shortcut], a: usize, b: usize) -> u64 {
        use std::collections::BinaryHeap;
        let n = tree.n();
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for &(u, v, w) in tree.edges() {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for s in shortcuts {
            adj[s.u].push((s.v, s.cost));
            adj[s.v].push((s.u, s.cost));
        }
        let mut dist = vec![u64::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[a] = 0;
        heap.push(Reverse((0u64, a)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    heap.push(Reverse((d + w, v)));
                }
            }
        }
        dist[b]
    }

    #[test]
    fn path_diameter_matches_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..80 {
            let n = rng.random_range(2..200);
            let edges = (1..n).map(|v| (v - 1, v, rng.random_range(0..50u64))).collect();
            let t = Tree::new(n, edges).unwrap();
            let s = random_shortcuts(n, rng.random_range(0..8), &mut rng);
            let want = naive_diameter(&t, &s).value;
            assert_eq!(path_diameter(&t, &s).unwrap(), want, "trial {trial}");
            assert_eq!(graph_diameter(&t, &s).value, want);
        }
        let non_path = Tree::new(4, vec![(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        assert!(matches!(path_diameter(&non_path, &[]), Err(Error::NotAPath)));
    }

    #[test]
    fn condensed_graph_preserves_terminal_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let inst = gen_random(rng.random_range(4..80), 3, rng.random_range(0..1000), RandomFamily::RandomL1).unwrap();
            let pairs: Vec<(usize, usize)> = (0..3)
                .filter_map(|_| {
                    let u = rng.random_range(0..inst.tree.n());
                    let v = rng.random_range(0..inst.tree.n());
                    (u != v).then_some((u, v))
                })
                .collect();
            let Ok(set) = ShortcutSet::from_pairs(&inst, &pairs) else { continue };
            let bin = binarize(&inst.tree);
            let mut fs = FarthestStructure::new(&bin.tree).unwrap();
            let s = rng.random_range(0..inst.tree.n());
            let cp = fs.checkpoint();
            let mut terms = std::collections::BTreeSet::new();
            terms.insert(s);
            for sc in set.edges() {
                terms.insert(sc.u);
                terms.insert(sc.v);
            }
            for &v in &terms {
                fs.make_terminal(v).unwrap();
            }
            let g = CondensedGraph::from_shrunk(&fs.shrink(), set.edges());
            for (v, d) in g.distances_from(s) {
                if terms.contains(&v) {
                    assert_eq!(d, naive_one_pair_distance(&bin.tree, set.edges(), s, v));
                }
            }
            fs.rollback(cp).unwrap();
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let n = rng.random_range(10..120);
            let t = random_tree(n, &mut rng);
            let s = random_shortcuts(n, 4, &mut rng);
            assert_eq!(
                graph_diameter(&t, &s),
                graph_diameter_with_threads(&t, &s, 4)
            );
        }
    }
}
