//! The farthest structure: terminal marking with shrunk-tree maintenance,
//! per-terminal offsets, and the query
//! `max over u in T of min over terminals v of (alpha_v + dist(v, u))`.
//!
//! All ties are broken through [`TieDist`] tuples. The reported witness pair
//! is pinned by the following contract, mirrored by the brute-force oracle in
//! [`brute`]: every vertex w is owned by the shrunk-tree vertex u minimizing
//! `(beta_u + d(u, w), hops(u, w), u)`; within a region the farthest vertex
//! maximizes `(d(u, w), hops(u, w), w)`; across regions the winner maximizes
//! `(beta_u + d(u, w*), hops(u, w*), u)`. The reported terminal is the one
//! attaining `beta` at the winning region's vertex under the same ordering.

use serde::Serialize;

use crate::dynforest::{DynamicForest, EccForest, MarkedAncestors};
use crate::error::{Error, Result};
use crate::index::StaticTreeIndex;
use crate::instance::Shortcut;
use crate::tree::Tree;

/// Lexicographic (cost, hop count, vertex id) distance tuple. Distinct owner
/// ids make the order strict, so comparisons never tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TieDist {
    pub cost: u64,
    pub hops: u32,
    pub vertex: usize,
}

impl TieDist {
    /// Shift the metric components, keeping the owner.
    pub fn shifted(self, cost: u64, hops: u32) -> TieDist {
        TieDist { cost: self.cost + cost, hops: self.hops + hops, vertex: self.vertex }
    }
}

/// Snapshot of the shrunk tree: the root, terminals and Steiner vertices, and
/// edges weighted by tree distance and hop count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrunkTree {
    pub root: usize,
    /// (vertex, is_terminal), sorted by vertex id.
    pub vertices: Vec<(usize, bool)>,
    pub edges: Vec<ShrunkEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShrunkEdge {
    pub parent: usize,
    pub child: usize,
    pub cost: u64,
    pub hops: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FarthestReport {
    pub value: u64,
    pub terminal: usize,
    pub witness: usize,
}

/// Token for LIFO rollback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    serial: u64,
    len: usize,
}

#[derive(Debug, Clone)]
enum Entry {
    MadeTerminal { v: usize, structural: Structural },
    AlphaSet { v: usize, old: u64 },
}

#[derive(Debug, Clone, Copy)]
enum Structural {
    /// v was already a Steiner vertex (or the root); flags only.
    None,
    /// v became a new leaf under `parent`.
    Leaf { parent: usize },
    /// v split the shrunk edge (parent, child).
    SplitSelf { parent: usize, child: usize },
    /// A new Steiner vertex split (parent, child) and v hangs below it.
    SplitSteiner { parent: usize, child: usize, steiner: usize },
}

const NO_SLOT: u32 = u32::MAX;

/// Reusable buffers for the query phases.
#[derive(Debug, Clone, Default)]
struct Scratch {
    stack: Vec<(u32, u32)>,
    /// Shrunk vertices in preorder, their parent slots, and edge weights.
    tmv: Vec<u32>,
    tmp: Vec<u32>,
    ecost: Vec<u64>,
    ehops: Vec<u32>,
    kids: Vec<[u32; 2]>,
    up: Vec<Option<TieDist>>,
    down: Vec<Option<TieDist>>,
    contrib: Vec<Option<TieDist>>,
    beta: Vec<TieDist>,
    cut_pairs: Vec<(usize, usize)>,
    cuts: Vec<(usize, usize, u64)>,
    terms: Vec<usize>,
    cedges: Vec<(u32, u32, u64)>,
    cdist: Vec<u64>,
    cdone: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct FarthestStructure {
    index: StaticTreeIndex,
    n: usize,
    terminal: Vec<bool>,
    alpha: Vec<u64>,
    in_tm: Vec<bool>,
    tm: DynamicForest,
    marked: MarkedAncestors,
    ecc: EccForest,
    m_count: usize,
    journal: Vec<Entry>,
    open_checkpoints: Vec<u64>,
    next_serial: u64,
    scratch: Scratch,
}

impl FarthestStructure {
    /// Build over a binary tree (binarize first if needed). The shrunk tree
    /// starts as the root alone, held as a Steiner vertex.
    pub fn new(tree: &Tree) -> Result<Self> {
        let (_, children) = tree.rooted_children();
        if let Some(v) = (0..tree.n()).find(|&v| children[v].len() > 2) {
            return Err(Error::NotBinary(v));
        }
        let index = StaticTreeIndex::build(tree);
        let marked_base = MarkedAncestors::build(&index);
        let ecc = EccForest::new(tree);
        let n = tree.n();
        let mut this = FarthestStructure {
            index,
            n,
            terminal: vec![false; n],
            alpha: vec![0; n],
            in_tm: vec![false; n],
            tm: DynamicForest::with_capacity(n),
            marked: marked_base,
            ecc,
            m_count: 0,
            journal: Vec::new(),
            open_checkpoints: Vec::new(),
            next_serial: 0,
            scratch: Scratch::default(),
        };
        let root = this.index.root();
        this.tm.add_vertex(root).expect("fresh forest");
        this.in_tm[root] = true;
        this.marked.mark(root);
        Ok(this)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> &StaticTreeIndex {
        &self.index
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminal[v]
    }

    pub fn terminal_count(&self) -> usize {
        self.m_count
    }

    pub fn alpha(&self, v: usize) -> Option<u64> {
        self.terminal[v].then_some(self.alpha[v])
    }

    /// Mark `v` as a terminal with `alpha_v = 0`, updating the shrunk tree by
    /// one of the three structural cases. Double-marking is an error.
    pub fn make_terminal(&mut self, v: usize) -> Result<()> {
        if self.terminal[v] {
            return Err(Error::AlreadyTerminal(v));
        }
        let structural = if self.in_tm[v] {
            Structural::None
        } else {
            let z = self
                .marked
                .closest_marked_ancestor(v)
                .expect("the root is always in the shrunk tree");
            let mut split: Option<(usize, usize)> = None;
            self.tm.for_each_child(z, |u| {
                let w = self.index.lca(v, u);
                if w != z {
                    debug_assert!(split.is_none(), "at most one child can share v's branch");
                    split = Some((u, w));
                }
            });
            match split {
                None => {
                    self.tm.add_vertex(v)?;
                    self.tm.link(z, v)?;
                    self.marked.mark(v);
                    self.in_tm[v] = true;
                    Structural::Leaf { parent: z }
                }
                Some((u, w)) if w == v => {
                    self.tm.cut(z, u)?;
                    self.tm.add_vertex(v)?;
                    self.tm.link(z, v)?;
                    self.tm.link(v, u)?;
                    self.marked.mark(v);
                    self.in_tm[v] = true;
                    Structural::SplitSelf { parent: z, child: u }
                }
                Some((u, y)) => {
                    self.tm.cut(z, u)?;
                    self.tm.add_vertex(y)?;
                    self.tm.add_vertex(v)?;
                    self.tm.link(z, y)?;
                    self.tm.link(y, u)?;
                    self.tm.link(y, v)?;
                    self.marked.mark(y);
                    self.marked.mark(v);
                    self.in_tm[y] = true;
                    self.in_tm[v] = true;
                    Structural::SplitSteiner { parent: z, child: u, steiner: y }
                }
            }
        };
        self.terminal[v] = true;
        self.alpha[v] = 0;
        self.m_count += 1;
        self.journal.push(Entry::MadeTerminal { v, structural });
        Ok(())
    }

    pub fn set_alpha(&mut self, v: usize, alpha: u64) -> Result<()> {
        if !self.terminal[v] {
            return Err(Error::NotTerminal(v));
        }
        self.journal.push(Entry::AlphaSet { v, old: self.alpha[v] });
        self.alpha[v] = alpha;
        Ok(())
    }

    /// Snapshot the shrunk tree; the structure is unchanged.
    pub fn shrink(&self) -> ShrunkTree {
        let root = self.index.root();
        let mut vertices: Vec<(usize, bool)> =
            self.tm.vertices().map(|v| (v, self.terminal[v])).collect();
        vertices.sort_unstable();
        let mut edges: Vec<ShrunkEdge> = self
            .tm
            .vertices()
            .filter_map(|v| {
                self.tm.parent(v).map(|p| {
                    let (cost, hops) = self.index.dist_hops(p, v);
                    ShrunkEdge { parent: p, child: v, cost, hops }
                })
            })
            .collect();
        edges.sort_unstable_by_key(|e| (e.parent, e.child));
        ShrunkTree { root, vertices, edges }
    }

    pub fn checkpoint(&mut self) -> Checkpoint {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.open_checkpoints.push(serial);
        Checkpoint { serial, len: self.journal.len() }
    }

    /// Undo every operation since `cp`. Checkpoints unwind strictly LIFO.
    pub fn rollback(&mut self, cp: Checkpoint) -> Result<()> {
        if self.open_checkpoints.last() != Some(&cp.serial) {
            return Err(Error::NonLifoRollback);
        }
        self.open_checkpoints.pop();
        while self.journal.len() > cp.len {
            let entry = self.journal.pop().unwrap();
            self.undo(entry);
        }
        Ok(())
    }

    fn undo(&mut self, entry: Entry) {
        match entry {
            Entry::AlphaSet { v, old } => self.alpha[v] = old,
            Entry::MadeTerminal { v, structural } => {
                self.terminal[v] = false;
                self.m_count -= 1;
                match structural {
                    Structural::None => {}
                    Structural::Leaf { parent } => {
                        self.marked.unmark(v);
                        self.tm.cut(parent, v).expect("journal inverse");
                        self.tm.remove_vertex(v).expect("journal inverse");
                        self.in_tm[v] = false;
                    }
                    Structural::SplitSelf { parent, child } => {
                        self.marked.unmark(v);
                        self.tm.cut(parent, v).expect("journal inverse");
                        self.tm.cut(v, child).expect("journal inverse");
                        self.tm.remove_vertex(v).expect("journal inverse");
                        self.tm.link(parent, child).expect("journal inverse");
                        self.in_tm[v] = false;
                    }
                    Structural::SplitSteiner { parent, child, steiner } => {
                        self.marked.unmark(v);
                        self.marked.unmark(steiner);
                        self.tm.cut(parent, steiner).expect("journal inverse");
                        self.tm.cut(steiner, child).expect("journal inverse");
                        self.tm.cut(steiner, v).expect("journal inverse");
                        self.tm.remove_vertex(v).expect("journal inverse");
                        self.tm.remove_vertex(steiner).expect("journal inverse");
                        self.tm.link(parent, child).expect("journal inverse");
                        self.in_tm[v] = false;
                        self.in_tm[steiner] = false;
                    }
                }
            }
        }
    }

    /// Preorder over the shrunk tree into the scratch arrays.
    fn collect_tm(&self, s: &mut Scratch) {
        s.tmv.clear();
        s.tmp.clear();
        s.ecost.clear();
        s.ehops.clear();
        s.kids.clear();
        s.stack.clear();
        s.stack.push((self.index.root() as u32, NO_SLOT));
        while let Some((v, pslot)) = s.stack.pop() {
            let slot = s.tmv.len() as u32;
            s.tmv.push(v);
            s.tmp.push(pslot);
            s.kids.push([NO_SLOT; 2]);
            if pslot == NO_SLOT {
                s.ecost.push(0);
                s.ehops.push(0);
            } else {
                let (c, h) = self.index.dist_hops(s.tmv[pslot as usize] as usize, v as usize);
                s.ecost.push(c);
                s.ehops.push(h);
                let ks = &mut s.kids[pslot as usize];
                *ks.iter_mut().find(|k| **k == NO_SLOT).expect("binary shrunk tree") = slot;
            }
            self.tm.for_each_child(v as usize, |c| s.stack.push((c as u32, slot)));
        }
    }

    /// Phase 1: beta = min over terminals of (alpha + distance), as TieDist
    /// triples owned by the attaining terminal, via an upward and a downward
    /// pass over the shrunk tree.
    fn phase1(&self, s: &mut Scratch) {
        let k = s.tmv.len();
        let own = |v: usize| -> Option<TieDist> {
            self.terminal[v].then(|| TieDist { cost: self.alpha[v], hops: 0, vertex: v })
        };
        let merge = |a: Option<TieDist>, b: Option<TieDist>| -> Option<TieDist> {
            match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            }
        };
        s.up.clear();
        s.up.extend((0..k).map(|i| own(s.tmv[i] as usize)));
        for i in (1..k).rev() {
            let lifted = s.up[i].map(|t| t.shifted(s.ecost[i], s.ehops[i]));
            let p = s.tmp[i] as usize;
            s.up[p] = merge(s.up[p], lifted);
        }
        s.contrib.clear();
        s.contrib.push(None);
        for i in 1..k {
            s.contrib.push(s.up[i].map(|t| t.shifted(s.ecost[i], s.ehops[i])));
        }
        s.down.clear();
        s.down.resize(k, None);
        for p in 0..k {
            let base = merge(own(s.tmv[p] as usize), s.down[p]);
            let [c1, c2] = s.kids[p];
            for (me, sib) in [(c1, c2), (c2, c1)] {
                if me == NO_SLOT {
                    continue;
                }
                let mut exclude = base;
                if sib != NO_SLOT {
                    exclude = merge(exclude, s.contrib[sib as usize]);
                }
                s.down[me as usize] =
                    exclude.map(|t| t.shifted(s.ecost[me as usize], s.ehops[me as usize]));
            }
        }
        s.beta.clear();
        for i in 0..k {
            s.beta.push(
                merge(s.up[i], s.down[i]).expect("every shrunk vertex reaches a terminal"),
            );
        }
    }

    /// Phases 2 and 3: cut each shrunk edge's underlying path at the
    /// ownership switch point, query one eccentricity per region, restore.
    /// Returns (winning key, winning slot, its eccentricity).
    fn phase23(&mut self, s: &mut Scratch) -> (TieDist, usize, TieDist) {
        let k = s.tmv.len();
        s.cut_pairs.clear();
        s.cuts.clear();
        for i in 1..k {
            let p = s.tmv[s.tmp[i] as usize] as usize;
            let c = s.tmv[i] as usize;
            let bp = s.beta[s.tmp[i] as usize].cost;
            let bc = s.beta[i].cost;
            let child_wins = |x: usize| -> bool {
                let (dp, hp) = self.index.dist_hops(p, x);
                let (dc, hc) = self.index.dist_hops(c, x);
                TieDist { cost: bp + dp, hops: hp, vertex: p }
                    > TieDist { cost: bc + dc, hops: hc, vertex: c }
            };
            debug_assert!(child_wins(c));
            debug_assert!(!child_wins(p));
            let switch = self.index.lift_while(c, self.index.depth_hops(p), &child_wins);
            let above = self.index.parent(switch);
            debug_assert!(!child_wins(above));
            let (w, _) = self.index.dist_hops(above, switch);
            s.cut_pairs.push((above, switch));
            s.cuts.push((above, switch, w));
        }
        self.ecc.cut_many(&s.cut_pairs).expect("path edges are active");
        let mut best_key = TieDist { cost: 0, hops: 0, vertex: 0 };
        let mut best: Option<(usize, TieDist)> = None;
        for i in 0..k {
            let e = self.ecc.eccentricity(s.tmv[i] as usize);
            let key =
                TieDist { cost: s.beta[i].cost + e.cost, hops: e.hops, vertex: s.tmv[i] as usize };
            if best.is_none() || key > best_key {
                best_key = key;
                best = Some((i, e));
            }
        }
        self.ecc.link_many(&s.cuts).expect("restoring cut edges");
        let (zi, e) = best.expect("at least one region");
        (best_key, zi, e)
    }

    /// The farthest query: value, attaining terminal, and witness vertex,
    /// under the TieDist contract. Restores the structure before returning.
    pub fn report_farthest(&mut self) -> Result<FarthestReport> {
        if self.m_count == 0 {
            return Err(Error::EmptyTerminals);
        }
        let mut s = std::mem::take(&mut self.scratch);
        self.collect_tm(&mut s);
        self.phase1(&mut s);
        let (best_key, zi, e) = self.phase23(&mut s);
        let report = FarthestReport {
            value: best_key.cost,
            terminal: s.beta[zi].vertex,
            witness: e.vertex,
        };
        debug_assert!(report.witness < self.n);
        self.scratch = s;
        Ok(report)
    }

    /// Eccentricity of `source` in the tree plus the given shortcuts: marks
    /// the source and all shortcut endpoints, solves the condensed graph,
    /// propagates distances, queries, and rolls everything back.
    pub(crate) fn ecc_of_source(
        &mut self,
        source: usize,
        shortcuts: &[Shortcut],
    ) -> Result<(u64, usize)> {
        let cp = self.checkpoint();
        let result = self.ecc_of_source_inner(source, shortcuts);
        self.rollback(cp)?;
        result
    }

    fn ecc_of_source_inner(
        &mut self,
        source: usize,
        shortcuts: &[Shortcut],
    ) -> Result<(u64, usize)> {
        let mut s = std::mem::take(&mut self.scratch);
        s.terms.clear();
        s.terms.push(source);
        for sc in shortcuts {
            s.terms.push(sc.u);
            s.terms.push(sc.v);
        }
        s.terms.sort_unstable();
        s.terms.dedup();
        for i in 0..s.terms.len() {
            // Callers may have pre-marked the shortcut endpoints.
            if self.terminal[s.terms[i]] {
                continue;
            }
            if let Err(e) = self.make_terminal(s.terms[i]) {
                self.scratch = s;
                return Err(e);
            }
        }
        self.collect_tm(&mut s);

        // Dense Dijkstra over the condensed graph: shrunk edges by slot plus
        // the shortcuts mapped to slots.
        let k = s.tmv.len();
        let slot_of = |s: &Scratch, v: usize| -> u32 {
            s.tmv.iter().position(|&x| x as usize == v).expect("terminal is a shrunk vertex")
                as u32
        };
        s.cedges.clear();
        for i in 1..k {
            s.cedges.push((s.tmp[i], i as u32, s.ecost[i]));
        }
        for sc in shortcuts {
            let (a, b) = (slot_of(&s, sc.u), slot_of(&s, sc.v));
            s.cedges.push((a, b, sc.cost));
        }
        let src = slot_of(&s, source) as usize;
        s.cdist.clear();
        s.cdist.resize(k, u64::MAX);
        s.cdone.clear();
        s.cdone.resize(k, false);
        s.cdist[src] = 0;
        for _ in 0..k {
            let mut at = usize::MAX;
            for i in 0..k {
                if !s.cdone[i]
                    && s.cdist[i] != u64::MAX
                    && (at == usize::MAX || s.cdist[i] < s.cdist[at])
                {
                    at = i;
                }
            }
            if at == usize::MAX {
                break;
            }
            s.cdone[at] = true;
            for &(a, b, w) in &s.cedges {
                let (a, b) = (a as usize, b as usize);
                let other = if a == at {
                    b
                } else if b == at {
                    a
                } else {
                    continue;
                };
                if s.cdist[at] + w < s.cdist[other] {
                    s.cdist[other] = s.cdist[at] + w;
                }
            }
        }
        for i in 0..k {
            let v = s.tmv[i] as usize;
            if self.terminal[v] {
                debug_assert_ne!(s.cdist[i], u64::MAX);
                self.journal.push(Entry::AlphaSet { v, old: self.alpha[v] });
                self.alpha[v] = s.cdist[i];
            }
        }

        self.phase1(&mut s);
        let (best_key, _, e) = self.phase23(&mut s);
        let out = (best_key.cost, e.vertex);
        self.scratch = s;
        Ok(out)
    }
}

/// Independent brute-force oracle for the farthest query, mirroring the
/// TieDist contract. Uses only parent-walk ancestors and full traversals; it
/// shares no code with the fast path.
pub mod brute {
    use super::{FarthestReport, TieDist};
    use crate::tree::Tree;

    fn dists_from(tree: &Tree, src: usize) -> Vec<(u64, u32)> {
        let mut out = vec![(u64::MAX, 0u32); tree.n()];
        out[src] = (0, 0);
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for &(v, w) in tree.neighbors(u) {
                if out[v].0 == u64::MAX {
                    out[v] = (out[u].0 + w, out[u].1 + 1);
                    stack.push(v);
                }
            }
        }
        out
    }

    /// Terminals are the (vertex, alpha) pairs; the tree must be the same
    /// binary tree the structure was built on.
    pub fn report_farthest(tree: &Tree, terminals: &[(usize, u64)]) -> FarthestReport {
        assert!(!terminals.is_empty());
        let n = tree.n();
        let root = tree.root();
        let (parent, _) = tree.rooted_children();
        let mut depth = vec![0u32; n];
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &(v, _) in tree.neighbors(u) {
                if Some(u) == parent[v] {
                    depth[v] = depth[u] + 1;
                    order.push(v);
                }
            }
        }
        let lca = |mut a: usize, mut b: usize| -> usize {
            while depth[a] > depth[b] {
                a = parent[a].unwrap();
            }
            while depth[b] > depth[a] {
                b = parent[b].unwrap();
            }
            while a != b {
                a = parent[a].unwrap();
                b = parent[b].unwrap();
            }
            a
        };

        // Shrunk vertex set: root plus all pairwise lowest common ancestors.
        let mut shrunk: Vec<usize> = vec![root];
        for &(u, _) in terminals {
            for &(v, _) in terminals {
                let w = lca(u, v);
                if !shrunk.contains(&w) {
                    shrunk.push(w);
                }
            }
        }
        shrunk.sort_unstable();

        let term_dists: Vec<(usize, u64, Vec<(u64, u32)>)> =
            terminals.iter().map(|&(v, a)| (v, a, dists_from(tree, v))).collect();
        let shrunk_dists: Vec<(usize, Vec<(u64, u32)>)> =
            shrunk.iter().map(|&u| (u, dists_from(tree, u))).collect();

        // beta at each shrunk vertex.
        let beta: Vec<TieDist> = shrunk
            .iter()
            .map(|&u| {
                term_dists
                    .iter()
                    .map(|(v, a, d)| TieDist { cost: a + d[u].0, hops: d[u].1, vertex: *v })
                    .min()
                    .unwrap()
            })
            .collect();

        // Ownership and per-region maxima.
        let mut region_best: Vec<Option<TieDist>> = vec![None; shrunk.len()];
        for w in 0..n {
            let mut owner = 0;
            let mut owner_key = TieDist { cost: u64::MAX, hops: 0, vertex: 0 };
            for (si, (_, d)) in shrunk_dists.iter().enumerate() {
                let key =
                    TieDist { cost: beta[si].cost + d[w].0, hops: d[w].1, vertex: shrunk[si] };
                if si == 0 || key < owner_key {
                    owner_key = key;
                    owner = si;
                }
            }
            let d = &shrunk_dists[owner].1;
            let cand = TieDist { cost: d[w].0, hops: d[w].1, vertex: w };
            if region_best[owner].is_none_or(|b| cand > b) {
                region_best[owner] = Some(cand);
            }
        }

        let mut best_key = TieDist { cost: 0, hops: 0, vertex: 0 };
        let mut best: Option<(usize, TieDist)> = None;
        for si in 0..shrunk.len() {
            let Some(e) = region_best[si] else { continue };
            let key = TieDist { cost: beta[si].cost + e.cost, hops: e.hops, vertex: shrunk[si] };
            if best.is_none() || key > best_key {
                best_key = key;
                best = Some((si, e));
            }
        }
        let (si, e) = best.unwrap();
        FarthestReport { value: best_key.cost, terminal: beta[si].vertex, witness: e.vertex }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::binarize;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn random_binary_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
        let raw: Vec<(usize, usize, u64)> =
            (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0..40))).collect();
        binarize(&Tree::new(n, raw).unwrap()).tree
    }

    /// Shrunk tree recomputed from the definition via pairwise lca closure.
    fn definitional_shrunk(fs: &FarthestStructure, terminals: &BTreeSet<usize>) -> ShrunkTree {
        let idx = fs.index();
        let root = idx.root();
        let mut closure: BTreeSet<usize> = BTreeSet::from([root]);
        for &u in terminals {
            for &v in terminals {
                closure.insert(idx.lca(u, v));
            }
        }
        let members: Vec<usize> = closure.iter().copied().collect();
        let mut edges = Vec::new();
        for &x in &members {
            if x == root {
                continue;
            }
            // Parent: deepest strict ancestor within the closure.
            let mut par = root;
            for &c in &members {
                if c != x && idx.lca(c, x) == c && idx.depth_hops(c) > idx.depth_hops(par) {
                    par = c;
                }
            }
            let (cost, hops) = idx.dist_hops(par, x);
            edges.push(ShrunkEdge { parent: par, child: x, cost, hops });
        }
        edges.sort_unstable_by_key(|e| (e.parent, e.child));
        ShrunkTree {
            root,
            vertices: members.iter().map(|&v| (v, terminals.contains(&v))).collect(),
            edges,
        }
    }

    #[test]
    fn single_edge_tree_has_root_only_shrunk() {
        let t = Tree::new(2, vec![(0, 1, 4)]).unwrap();
        let fs = FarthestStructure::new(&t).unwrap();
        let s = fs.shrink();
        assert_eq!(s.vertices, vec![(0, false)]);
        assert!(s.edges.is_empty());
    }

    #[test]
    fn report_without_terminals_is_an_error() {
        let t = Tree::new(3, vec![(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut fs = FarthestStructure::new(&t).unwrap();
        assert!(matches!(fs.report_farthest(), Err(Error::EmptyTerminals)));
    }

    #[test]
    fn rejects_non_binary_trees() {
        let star = Tree::new(5, vec![(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]).unwrap();
        assert!(matches!(FarthestStructure::new(&star), Err(Error::NotBinary(0))));
    }

    #[test]
    fn path_endpoint_report() {
        let t = Tree::new(3, vec![(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut fs = FarthestStructure::new(&t).unwrap();
        fs.make_terminal(0).unwrap();
        let r = fs.report_farthest().unwrap();
        assert_eq!((r.value, r.terminal, r.witness), (2, 0, 2));
    }

    #[test]
    fn all_terminals_alpha_zero_reports_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_binary_tree(20, &mut rng);
        let mut fs = FarthestStructure::new(&t).unwrap();
        for v in 0..t.n() {
            fs.make_terminal(v).unwrap();
        }
        assert_eq!(fs.report_farthest().unwrap().value, 0);
    }

    #[test]
    fn marking_root_changes_flags_only() {
        let t = Tree::new(3, vec![(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut fs = FarthestStructure::new(&t).unwrap();
        let before = fs.shrink();
        fs.make_terminal(0).unwrap();
        let after = fs.shrink();
        assert_eq!(
            before.vertices.iter().map(|&(v, _)| v).collect::<Vec<_>>(),
            after.vertices.iter().map(|&(v, _)| v).collect::<Vec<_>>()
        );
        assert!(after.vertices[0].1);
        assert!(matches!(fs.make_terminal(0), Err(Error::AlreadyTerminal(0))));
    }

    #[test]
    fn shrunk_tree_matches_definition_under_random_marks() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..40 {
            let n = rng.random_range(2..120);
            let t = random_binary_tree(n, &mut rng);
            let mut fs = FarthestStructure::new(&t).unwrap();
            let mut marked = BTreeSet::new();
            for _ in 0..30 {
                let v = rng.random_range(0..t.n());
                if marked.insert(v) {
                    fs.make_terminal(v).unwrap();
                    assert_eq!(fs.shrink(), definitional_shrunk(&fs, &marked), "after marking {v}");
                }
            }
            // Shrunk tree stays within twice the terminal count.
            let s = fs.shrink();
            assert!(s.vertices.len() <= 2 * marked.len().max(1));
        }
    }

    #[test]
    fn set_alpha_requires_terminal() {
        let t = Tree::new(3, vec![(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut fs = FarthestStructure::new(&t).unwrap();
        assert!(matches!(fs.set_alpha(1, 5), Err(Error::NotTerminal(1))));
        fs.make_terminal(1).unwrap();
        fs.set_alpha(1, 5).unwrap();
        fs.set_alpha(1, 9).unwrap();
        assert_eq!(fs.alpha(1), Some(9));
    }

    #[test]
    fn report_matches_brute_force_on_random_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for trial in 0..150 {
            let n = rng.random_range(2..120);
            let t = random_binary_tree(n, &mut rng);
            let mut fs = FarthestStructure::new(&t).unwrap();
            let m = rng.random_range(1..=t.n().min(12));
            let mut terms: Vec<(usize, u64)> = Vec::new();
            let mut chosen = BTreeSet::new();
            for _ in 0..m {
                let v = rng.random_range(0..t.n());
                if chosen.insert(v) {
                    let a = rng.random_range(0..1000);
                    fs.make_terminal(v).unwrap();
                    fs.set_alpha(v, a).unwrap();
                    terms.push((v, a));
                }
            }
            let got = fs.report_farthest().unwrap();
            let want = brute::report_farthest(&t, &terms);
            assert_eq!(got, want, "trial {trial} n {n} terms {terms:?}");
            // The structure is restored; a second query agrees.
            assert_eq!(fs.report_farthest().unwrap(), want);
        }
    }

    #[test]
    fn rollback_restores_observable_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..30 {
            let n = rng.random_range(2..100);
            let t = random_binary_tree(n, &mut rng);
            let mut fs = FarthestStructure::new(&t).unwrap();
            let mut marked = BTreeSet::new();
            for _ in 0..rng.random_range(0..8) {
                let v = rng.random_range(0..t.n());
                if marked.insert(v) {
                    fs.make_terminal(v).unwrap();
                }
            }
            let snapshot = fs.shrink();
            let cp = fs.checkpoint();
            for _ in 0..rng.random_range(1..10) {
                let v = rng.random_range(0..t.n());
                if !fs.is_terminal(v) {
                    fs.make_terminal(v).unwrap();
                    fs.set_alpha(v, rng.random_range(0..50)).unwrap();
                }
            }
            fs.rollback(cp).unwrap();
            assert_eq!(fs.shrink(), snapshot);
            assert_eq!(fs.shrink(), definitional_shrunk(&fs, &marked));
        }
    }

    #[test]
    fn nested_checkpoints_unwind_in_order() {
        let t = Tree::new(4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let mut fs = FarthestStructure::new(&t).unwrap();
        let c1 = fs.checkpoint();
        fs.make_terminal(3).unwrap();
        let c2 = fs.checkpoint();
        fs.make_terminal(1).unwrap();
        assert!(matches!(fs.rollback(c1), Err(Error::NonLifoRollback)));
        fs.rollback(c2).unwrap();
        assert!(fs.is_terminal(3) && !fs.is_terminal(1));
        fs.rollback(c1).unwrap();
        assert_eq!(fs.terminal_count(), 0);
    }
}
