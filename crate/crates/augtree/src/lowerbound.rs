//! Adversarial instance families with counting oracles.
//!
//! The family lives on a fixed tree: four identical stars whose centers are
//! joined by three-edge paths, every tree edge of cost 2. Costs of all vertex
//! pairs are distances in an augmented graph that differs between the two
//! variants only at one leaf pair (a, b): cost 1 in the `Iab` variant, cost 2
//! in the `I` variant. Distinguishing the variants therefore requires probing
//! that one pair among quadratically many candidates.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;

use crate::cost::CostOracle;
use crate::diameter::graph_diameter;
use crate::error::{Error, Result};
use crate::instance::{Instance, Shortcut};
use crate::solvers::{self, ExactOptions, SolveResult};
use crate::tree::Tree;

/// Vertex-id layout of the four-star tree: star `s` occupies ids
/// `s*n_star..(s+1)*n_star` (center first), followed by the six path vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LbLayout {
    n_star: usize,
}

/// Which vertex class an id belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbClass {
    Center(usize),
    Leaf(usize),
    /// Path vertices in chain order between the centers:
    /// x0 - P0 - P1 - x1 - P2 - P3 - x2 - P4 - P5 - x3.
    Path(usize),
}

impl LbLayout {
    pub fn new(n_star: usize) -> Self {
        LbLayout { n_star }
    }

    pub fn n_star(&self) -> usize {
        self.n_star
    }

    pub fn n(&self) -> usize {
        4 * self.n_star + 6
    }

    pub fn center(&self, star: usize) -> usize {
        debug_assert!(star < 4);
        star * self.n_star
    }

    pub fn leaves(&self, star: usize) -> Range<usize> {
        debug_assert!(star < 4);
        star * self.n_star + 1..(star + 1) * self.n_star
    }

    pub fn path_vertex(&self, p: usize) -> usize {
        debug_assert!(p < 6);
        4 * self.n_star + p
    }

    pub fn classify(&self, v: usize) -> LbClass {
        if v >= 4 * self.n_star {
            LbClass::Path(v - 4 * self.n_star)
        } else if v % self.n_star == 0 {
            LbClass::Center(v / self.n_star)
        } else {
            LbClass::Leaf(v / self.n_star)
        }
    }

    /// Tree edges before any rewiring: stars plus the three connecting paths.
    pub fn base_tree_edges(&self) -> Vec<(usize, usize, u64)> {
        let mut edges = Vec::with_capacity(self.n() - 1);
        for s in 0..4 {
            for leaf in self.leaves(s) {
                edges.push((self.center(s), leaf, 2));
            }
        }
        for i in 0..3 {
            let (vi, ui) = (self.path_vertex(2 * i), self.path_vertex(2 * i + 1));
            edges.push((self.center(i), vi, 2));
            edges.push((vi, ui, 2));
            edges.push((ui, self.center(i + 1), 2));
        }
        edges
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LbVariant {
    /// All star-1/star-2 leaf pairs cost 2; no cheap pair exists.
    I,
    /// The single pair (a, b) costs 1.
    Iab { a: usize, b: usize },
}

impl LbVariant {
    pub fn name(&self) -> &'static str {
        match self {
            LbVariant::I => "I",
            LbVariant::Iab { .. } => "Iab",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBoundParams {
    pub n_star: usize,
    pub k: usize,
    pub variant: LbVariant,
}

impl LowerBoundParams {
    pub fn new(n_star: usize, k: usize, variant: LbVariant) -> Result<Self> {
        if k < 3 {
            return Err(Error::LowerBound(format!("k must be at least 3, got {k}")));
        }
        if n_star < 2 || n_star + 1 < k {
            return Err(Error::LowerBound(format!(
                "n_star must be at least max(2, k-1), got n_star={n_star}, k={k}"
            )));
        }
        let layout = LbLayout::new(n_star);
        if let LbVariant::Iab { a, b } = variant {
            if !layout.leaves(1).contains(&a) {
                return Err(Error::LowerBound(format!("a={a} is not a leaf of the second star")));
            }
            if !layout.leaves(2).contains(&b) {
                return Err(Error::LowerBound(format!("b={b} is not a leaf of the third star")));
            }
        }
        Ok(LowerBoundParams { n_star, k, variant })
    }

    pub fn layout(&self) -> LbLayout {
        LbLayout::new(self.n_star)
    }

    /// The default special pair: first leaves of the two middle stars.
    pub fn default_ab(n_star: usize) -> (usize, usize) {
        let layout = LbLayout::new(n_star);
        (layout.leaves(1).start, layout.leaves(2).start)
    }

    /// Leaves of the first star rewired onto `y` when k > 3.
    pub fn z_set(&self) -> Range<usize> {
        let l1 = self.layout().leaves(0);
        l1.start..l1.start + (self.k - 3)
    }

    /// The fourth-star leaf that hosts the rewired edges.
    pub fn y(&self) -> usize {
        self.layout().leaves(3).start
    }
}

/// Costs of the family, computed per query as a distance in the augmenting
/// graph. A query runs Dijkstra on a constant-size quotient: the four
/// centers, the six path vertices, the special pair, and up to three
/// representative leaves per star. This is exact because star-0/star-3
/// leaves have degree one in the cost graph, and an interior visit to a
/// middle-star leaf can always be swapped to an equivalent representative
/// (at most one interior leaf per star class can appear on a shortest path,
/// and at most two representatives can collide with the query endpoints).
#[derive(Debug, Clone, PartialEq)]
pub struct LbOracle {
    layout: LbLayout,
    variant: LbVariant,
    core: Vec<usize>,
}

impl LbOracle {
    pub fn new(n_star: usize, variant: LbVariant) -> Self {
        let layout = LbLayout::new(n_star);
        let mut core: BTreeSet<usize> = BTreeSet::new();
        for s in 0..4 {
            core.insert(layout.center(s));
            for leaf in layout.leaves(s).take(3) {
                core.insert(leaf);
            }
        }
        for p in 0..6 {
            core.insert(layout.path_vertex(p));
        }
        if let LbVariant::Iab { a, b } = variant {
            core.insert(a);
            core.insert(b);
            // Keep three generic representatives even when a or b shadows one.
            for leaf in layout.leaves(1).filter(|&l| l != a).take(3) {
                core.insert(leaf);
            }
            for leaf in layout.leaves(2).filter(|&l| l != b).take(3) {
                core.insert(leaf);
            }
        }
        LbOracle { layout, variant, core: core.into_iter().collect() }
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn layout(&self) -> LbLayout {
        self.layout
    }

    pub fn variant(&self) -> LbVariant {
        self.variant
    }

    /// Direct edge cost between two vertices in the cost graph, if any.
    fn direct(&self, u: usize, v: usize) -> Option<u64> {
        use LbClass::*;
        if u == v {
            return None;
        }
        if let LbVariant::Iab { a, b } = self.variant {
            if (u, v) == (a, b) || (u, v) == (b, a) {
                return Some(1);
            }
        }
        let (cu, cv) = (self.layout.classify(u), self.layout.classify(v));
        let pair = |x: LbClass, y: LbClass| (cu == x && cv == y) || (cu == y && cv == x);
        // Tree edges.
        for s in 0..4 {
            if pair(Center(s), Leaf(s)) {
                return Some(2);
            }
        }
        if let (Some(pu), Some(pv)) = (self.chain_pos(u), self.chain_pos(v)) {
            if pu.abs_diff(pv) == 1 {
                return Some(2);
            }
        }
        // Augmenting edges.
        if pair(Center(0), Leaf(1)) || pair(Center(3), Leaf(2)) {
            return Some(2);
        }
        if pair(Leaf(1), Leaf(2)) {
            return Some(2);
        }
        if (cu == Leaf(1) && cv == Leaf(1)) || (cu == Leaf(2) && cv == Leaf(2)) {
            return Some(3);
        }
        if pair(Center(1), Leaf(2)) || pair(Center(2), Leaf(1)) {
            return Some(3);
        }
        if pair(Center(0), Leaf(2)) || pair(Center(3), Leaf(1)) {
            return Some(3);
        }
        None
    }

    /// Position of a vertex along the center/path chain, if it lies on it.
    fn chain_pos(&self, v: usize) -> Option<usize> {
        match self.layout.classify(v) {
            LbClass::Center(s) => Some(3 * s),
            LbClass::Path(p) => Some(p / 2 * 3 + p % 2 + 1),
            LbClass::Leaf(_) => None,
        }
    }

    /// Distance in the cost graph; this is the oracle cost of the pair.
    pub fn dist(&self, u: usize, v: usize) -> u64 {
        assert!(u != v && u < self.n() && v < self.n());
        let mut verts: Vec<usize> = Vec::with_capacity(self.core.len() + 2);
        verts.extend_from_slice(&self.core);
        for x in [u, v] {
            if !self.core.contains(&x) {
                verts.push(x);
            }
        }
        let m = verts.len();
        let src = verts.iter().position(|&x| x == u).unwrap();
        let dst = verts.iter().position(|&x| x == v).unwrap();
        // Dense Dijkstra on the induced quotient graph.
        let mut cost = vec![u64::MAX; m];
        let mut done = vec![false; m];
        cost[src] = 0;
        for _ in 0..m {
            let mut best = usize::MAX;
            for i in 0..m {
                if !done[i] && cost[i] != u64::MAX && (best == usize::MAX || cost[i] < cost[best]) {
                    best = i;
                }
            }
            if best == usize::MAX || best == dst {
                break;
            }
            done[best] = true;
            for i in 0..m {
                if done[i] {
                    continue;
                }
                if let Some(w) = self.direct(verts[best], verts[i]) {
                    let c = cost[best] + w;
                    if c < cost[i] {
                        cost[i] = c;
                    }
                }
            }
        }
        cost[dst]
    }

    /// The full cost graph, for validation against the quotient computation.
    pub fn explicit_cost_graph(&self) -> Vec<(usize, usize, u64)> {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if let Some(w) = self.direct(u, v) {
                    edges.push((u, v, w));
                }
            }
        }
        edges
    }
}

/// Build a counting instance of the family. For k > 3 the tree is rewired:
/// the k-3 edges from the first center to the `z_set` leaves are replaced by
/// edges from `y` (a fourth-star leaf) to those leaves, at cost 9, which
/// equals their oracle cost; the cost oracle itself is independent of k.
pub fn gen_lb(params: &LowerBoundParams) -> Result<Instance> {
    let layout = params.layout();
    let oracle = LbOracle::new(params.n_star, params.variant);
    let mut edges = layout.base_tree_edges();
    if params.k > 3 {
        let y = params.y();
        for z in params.z_set() {
            let pos = edges
                .iter()
                .position(|&(a, b, _)| (a, b) == (layout.center(0), z))
                .expect("star edge present");
            edges[pos] = (y, z, 9);
        }
    }
    let tree = Tree::new(layout.n(), edges)?;
    Instance::new(tree, CostOracle::lower_bound(oracle), params.k)
}

/// The witness shortcut set from the construction: a chain through (a, b)
/// plus, for k > 3, the star re-attaching the rewired leaves.
pub fn witness_shortcuts(params: &LowerBoundParams, instance: &Instance) -> Vec<Shortcut> {
    let layout = params.layout();
    let (a, b) = match params.variant {
        LbVariant::Iab { a, b } => (a, b),
        LbVariant::I => LowerBoundParams::default_ab(params.n_star),
    };
    let mut s = Vec::with_capacity(params.k);
    for (u, v) in [(layout.center(0), a), (a, b), (b, layout.center(3))] {
        s.push(Shortcut { u, v, cost: instance.oracle.cost(u, v) });
    }
    for z in params.z_set() {
        let u = layout.center(0);
        s.push(Shortcut { u, v: z, cost: instance.oracle.cost(u, z) });
    }
    s
}

/// Results of checking the three verifiable facts of the construction.
#[derive(Debug, Clone, Serialize)]
pub struct FactsReport {
    pub n_star: usize,
    pub k: usize,
    /// diam(T + S) for the witness shortcut set on the `Iab` instance.
    pub fact1_witness_diam: u64,
    /// Exact optimum over all k-subsets on the `I` instance.
    pub fact2_optimum_i: u64,
    /// All pairs on which the two variants' cost tables differ.
    pub fact3_differing_pairs: Vec<(usize, usize)>,
    pub ok: bool,
}

/// Verify the construction facts at desk scale: (1) the witness set achieves
/// diameter at most 9 on `Iab`, (2) the exact optimum on `I` is at least 10,
/// (3) the two cost tables differ exactly at (a, b). Fact (2) enumerates all
/// candidate subsets and is feasible only for small n_star.
pub fn check_facts(n_star: usize, k: usize, ab: Option<(usize, usize)>, budget: u64) -> Result<FactsReport> {
    let (a, b) = ab.unwrap_or_else(|| LowerBoundParams::default_ab(n_star));
    let params_ab = LowerBoundParams::new(n_star, k, LbVariant::Iab { a, b })?;
    let params_i = LowerBoundParams::new(n_star, k, LbVariant::I)?;

    let inst_ab = gen_lb(&params_ab)?;
    let witness = witness_shortcuts(&params_ab, &inst_ab);
    let fact1 = graph_diameter(&inst_ab.tree, &witness).value;

    let inst_i = gen_lb(&params_i)?;
    let opts = ExactOptions { budget, ..ExactOptions::default() };
    let fact2 = solvers::exact_doat(&inst_i, &opts)?.diam;

    let oracle_ab = LbOracle::new(n_star, LbVariant::Iab { a, b });
    let oracle_i = LbOracle::new(n_star, LbVariant::I);
    let n = oracle_ab.n();
    let mut diffs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if oracle_ab.dist(u, v) != oracle_i.dist(u, v) {
                diffs.push((u, v));
            }
        }
    }

    let ok = fact1 <= 9 && fact2 >= 10 && diffs == [(a.min(b), a.max(b))];
    Ok(FactsReport {
        n_star,
        k,
        fact1_witness_diam: fact1,
        fact2_optimum_i: fact2,
        fact3_differing_pairs: diffs,
        ok,
    })
}

/// Which algorithm an adversary experiment drives.
#[derive(Debug, Clone, Copy)]
pub enum AdversaryAlgo {
    Approx4,
    Ptas { eps: f64, budget: u64 },
    Exact { budget: u64 },
}

impl AdversaryAlgo {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryAlgo::Approx4 => "star4",
            AdversaryAlgo::Ptas { .. } => "ptas",
            AdversaryAlgo::Exact { .. } => "exact",
        }
    }

    fn run(&self, instance: &Instance) -> Result<SolveResult> {
        match *self {
            AdversaryAlgo::Approx4 => solvers::approx4(instance),
            AdversaryAlgo::Ptas { eps, budget } => solvers::ptas(instance, eps, budget),
            AdversaryAlgo::Exact { budget } => {
                solvers::exact_doat(instance, &ExactOptions { budget, ..ExactOptions::default() })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryRow {
    pub variant: String,
    pub n_star: usize,
    pub k: usize,
    pub algo: String,
    pub queries: u64,
    pub diam: u64,
    pub distinguished: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryReport {
    pub rows: Vec<QueryRow>,
    /// (a, b) candidate pairs whose cost was never queried on input `I`.
    pub unqueried_ab_pairs: u64,
    pub total_ab_pairs: u64,
}

impl QueryReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variant,n_star,k,algo,queries,diam,distinguished\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.variant, r.n_star, r.k, r.algo, r.queries, r.diam, r.distinguished
            ));
        }
        out
    }
}

/// Run `algo` on the `I` instance and on `samples` sampled `Iab` instances,
/// recording query counts, achieved diameters, and whether the outputs
/// distinguish the variants. Also counts how many candidate (a, b) pairs the
/// algorithm never probed on input `I`.
pub fn adversary_experiment(
    n_star: usize,
    k: usize,
    algo: AdversaryAlgo,
    samples: usize,
    seed: u64,
) -> Result<QueryReport> {
    use rand::prelude::*;

    let params_i = LowerBoundParams::new(n_star, k, LbVariant::I)?;
    let layout = params_i.layout();
    let inst_i = gen_lb(&params_i)?;
    inst_i.oracle.enable_log();
    let res_i = algo.run(&inst_i)?;
    let log = inst_i.oracle.take_log().unwrap_or_default();

    let ab_pairs: Vec<(usize, usize)> = layout
        .leaves(1)
        .flat_map(|a| layout.leaves(2).map(move |b| (a, b)))
        .collect();
    let queried = ab_pairs.iter().filter(|&&(a, b)| log.contains(&(a.min(b), a.max(b)))).count();
    let total = ab_pairs.len();

    let mut rows = vec![QueryRow {
        variant: "I".into(),
        n_star,
        k,
        algo: algo.name().into(),
        queries: res_i.oracle_queries,
        diam: res_i.diam,
        distinguished: false,
    }];

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pool = ab_pairs;
    pool.shuffle(&mut rng);
    for &(a, b) in pool.iter().take(samples) {
        let params = LowerBoundParams::new(n_star, k, LbVariant::Iab { a, b })?;
        let inst = gen_lb(&params)?;
        let res = algo.run(&inst)?;
        rows.push(QueryRow {
            variant: "Iab".into(),
            n_star,
            k,
            algo: algo.name().into(),
            queries: res.oracle_queries,
            diam: res.diam,
            distinguished: res.diam != res_i.diam,
        });
    }

    Ok(QueryReport {
        rows,
        unqueried_ab_pairs: (total - queried) as u64,
        total_ab_pairs: total as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{verify_metric, MetricCheck};

    fn full_dists(n: usize, edges: &[(usize, usize, u64)], src: usize) -> Vec<u64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut dist = vec![u64::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0u64, src)));
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
        dist
    }

    #[test]
    fn quotient_matches_explicit_dijkstra() {
        for n_star in 2..=8 {
            let (a, b) = LowerBoundParams::default_ab(n_star);
            // Off-default special pair when the stars are big enough.
            let variants = if n_star >= 4 {
                vec![LbVariant::I, LbVariant::Iab { a, b }, LbVariant::Iab { a: a + 2, b: b + 1 }]
            } else {
                vec![LbVariant::I, LbVariant::Iab { a, b }]
            };
            for variant in variants {
                let oracle = LbOracle::new(n_star, variant);
                let n = oracle.n();
                let edges = oracle.explicit_cost_graph();
                for u in 0..n {
                    let d = full_dists(n, &edges, u);
                    for v in 0..n {
                        if u == v {
                            continue;
                        }
                        assert_eq!(
                            oracle.dist(u, v),
                            d[v],
                            "n_star={n_star} variant={:?} pair=({u},{v})",
                            variant
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn special_pair_costs() {
        let (a, b) = LowerBoundParams::default_ab(4);
        let iab = LbOracle::new(4, LbVariant::Iab { a, b });
        assert_eq!(iab.dist(a, b), 1);
        for u in iab.layout().leaves(1) {
            for v in iab.layout().leaves(2) {
                if (u, v) != (a, b) {
                    assert_eq!(iab.dist(u, v), 2);
                }
            }
        }
        let i = LbOracle::new(4, LbVariant::I);
        assert_eq!(i.dist(a, b), 2);
    }

    #[test]
    fn both_variants_metric_at_small_sizes() {
        for n_star in 2..=5 {
            let (a, b) = LowerBoundParams::default_ab(n_star);
            for variant in [LbVariant::I, LbVariant::Iab { a, b }] {
                let oracle = CostOracle::lower_bound(LbOracle::new(n_star, variant));
                let n = oracle.n();
                assert!(verify_metric(&oracle, n, MetricCheck::Full).ok, "n_star={n_star}");
            }
        }
    }

    #[test]
    fn rewired_edges_cost_nine() {
        let params = LowerBoundParams::new(6, 5, LbVariant::I).unwrap();
        let inst = gen_lb(&params).unwrap();
        let y = params.y();
        for z in params.z_set() {
            assert_eq!(inst.oracle.peek(y, z), 9);
            assert!(inst.tree.edges().contains(&(y, z, 9)));
        }
        // The detached star edges become ordinary cost-2 shortcuts.
        let x0 = params.layout().center(0);
        for z in params.z_set() {
            assert_eq!(inst.oracle.peek(x0, z), 2);
        }
    }

    #[test]
    fn lbk_vertex_count() {
        let params = LowerBoundParams::new(6, 5, LbVariant::I).unwrap();
        let inst = gen_lb(&params).unwrap();
        assert_eq!(inst.tree.n(), 4 * 6 + 6);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LowerBoundParams::new(1, 3, LbVariant::I).is_err());
        assert!(LowerBoundParams::new(3, 2, LbVariant::I).is_err());
        assert!(LowerBoundParams::new(3, 5, LbVariant::I).is_err()); // n_star < k-1
        assert!(LowerBoundParams::new(4, 3, LbVariant::Iab { a: 0, b: 9 }).is_err());
    }
}
