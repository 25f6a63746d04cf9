//! Eccentricity queries on a dynamic sub-forest of a fixed base tree.
//!
//! The structure contracts the base tree once into a balanced hierarchy of
//! clusters (rake and compress merges, as in top trees). Each cluster keeps
//! connectivity between its two anchor vertices, the anchor-to-anchor path
//! length, the farthest vertex from each anchor within the anchor's piece,
//! and the best connected pair inside the cluster, all restricted to the
//! currently active edges. Cutting or re-linking a base edge flips one leaf
//! cluster and recomputes the aggregates on its root path; an eccentricity
//! query walks the same path combining sibling aggregates, so both run in
//! time proportional to the decomposition depth (logarithmic in expectation).
//! Batch variants recompute shared root-path segments once. Nodes are stored
//! in breadth-first order from the decomposition root, keeping the heavily
//! shared upper levels together in cache.
//!
//! Pendant auxiliary vertices can be hung off any real vertex. They exist so
//! the classic reduction of eccentricity to two diameter queries can be
//! exercised against this structure; production callers never attach them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::farthest::TieDist;
use crate::tree::Tree;

const NONE: u32 = u32::MAX;

/// Max distance with witness; ordered lexicographically so ties resolve by
/// hop count and then by vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Far {
    cost: u64,
    hops: u32,
    vertex: u32,
}

impl Far {
    fn seed(v: u32) -> Far {
        Far { cost: 0, hops: 0, vertex: v }
    }

    fn extend(self, cost: u64, hops: u32) -> Far {
        Far { cost: self.cost + cost, hops: self.hops + hops, vertex: self.vertex }
    }
}

/// Best connected pair within a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Best {
    cost: u64,
    hops: u32,
    a: u32,
    b: u32,
}

impl Best {
    fn single(v: u32) -> Best {
        Best { cost: 0, hops: 0, a: v, b: v }
    }

    fn cross(x: Far, y: Far) -> Best {
        Best {
            cost: x.cost + y.cost,
            hops: x.hops + y.hops,
            a: x.vertex.min(y.vertex),
            b: x.vertex.max(y.vertex),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Agg {
    conn: bool,
    len_cost: u64,
    len_hops: u32,
    d: [Far; 2],
    best: Best,
}

const KIND_LEAF: u8 = 0;
const KIND_COMPRESS: u8 = 1;
const KIND_RAKE: u8 = 2;

/// One decomposition node with its aggregate. For leaves `edge` names the
/// base edge. For compress nodes `vtx` is the internalized middle vertex.
/// For rake nodes `vtx` is the junction and `internal` the internalized
/// anchor of the absorbed child; child 0 is the host.
#[derive(Debug, Clone, Copy)]
struct Node {
    kind: u8,
    edge: u32,
    vtx: u32,
    internal: u32,
    c0: u32,
    c1: u32,
    a0: u32,
    a1: u32,
    parent: u32,
    agg: Agg,
}

#[derive(Debug, Clone, Copy)]
struct Pendant {
    weight: u64,
    aux: u32,
}

#[derive(Debug, Clone)]
pub struct EccForest {
    n: usize,
    ecost: Vec<u64>,
    eactive: Vec<bool>,
    eends: Vec<(u32, u32)>,
    eid: HashMap<(u32, u32), u32>,
    /// Leaf node of each base edge.
    leaf_of: Vec<u32>,
    /// Decomposition nodes in breadth-first order; the root is node 0 and
    /// every parent id is smaller than its children's.
    nodes: Vec<Node>,
    internal_at: Vec<u32>,
    depth: usize,
    pendants: Vec<Option<Pendant>>,
    aux: Vec<Option<(u32, u64)>>,
    free_aux: Vec<u32>,
    dirty: Vec<u32>,
    pending: Vec<u32>,
}

fn combine(nodes: &[Node], pendants: &[Option<Pendant>], eactive: &[bool], ecost: &[u64], eends: &[(u32, u32)], id: usize) -> Agg {
    let pend = |v: u32| -> Option<Far> {
        pendants[v as usize].map(|p| Far { cost: p.weight, hops: 1, vertex: p.aux })
    };
    let d_at = |c: &Node, v: u32| -> Far {
        debug_assert!(c.a0 == v || c.a1 == v);
        if c.a0 == v {
            c.agg.d[0]
        } else {
            c.agg.d[1]
        }
    };
    let t = &nodes[id];
    match t.kind {
        KIND_LEAF => {
            let e = t.edge as usize;
            let (u, v) = eends[e];
            if eactive[e] {
                let w = ecost[e];
                Agg {
                    conn: true,
                    len_cost: w,
                    len_hops: 1,
                    d: [Far { cost: w, hops: 1, vertex: v }, Far { cost: w, hops: 1, vertex: u }],
                    best: Best { cost: w, hops: 1, a: u.min(v), b: u.max(v) },
                }
            } else {
                Agg {
                    conn: false,
                    len_cost: 0,
                    len_hops: 0,
                    d: [Far::seed(u), Far::seed(v)],
                    best: Best::single(u).max(Best::single(v)),
                }
            }
        }
        KIND_COMPRESS => {
            let mid = t.vtx;
            let lt = &nodes[t.c0 as usize];
            let rt = &nodes[t.c1 as usize];
            let (l, r) = (&lt.agg, &rt.agg);
            let dml = d_at(lt, mid);
            let dmr = d_at(rt, mid);
            let pend_m = pend(mid);

            let mut da = d_at(lt, t.a0);
            if l.conn {
                da = da.max(dmr.extend(l.len_cost, l.len_hops));
                if let Some(p) = pend_m {
                    da = da.max(p.extend(l.len_cost, l.len_hops));
                }
            }
            let mut db = d_at(rt, t.a1);
            if r.conn {
                db = db.max(dml.extend(r.len_cost, r.len_hops));
                if let Some(p) = pend_m {
                    db = db.max(p.extend(r.len_cost, r.len_hops));
                }
            }
            let mut best = l.best.max(r.best).max(Best::cross(dml, dmr));
            if let Some(p) = pend_m {
                best = best.max(Best::cross(dml.max(dmr), p));
            }
            Agg {
                conn: l.conn && r.conn,
                len_cost: l.len_cost + r.len_cost,
                len_hops: l.len_hops + r.len_hops,
                d: [da, db],
                best,
            }
        }
        _ => {
            let junction = t.vtx;
            let ht = &nodes[t.c0 as usize];
            let at = &nodes[t.c1 as usize];
            let (h, ab) = (&ht.agg, &at.agg);
            let pend_c = pend(t.internal);

            let dj = d_at(at, junction);
            let dc = d_at(at, t.internal);
            let mut dj_lifted = dj;
            if ab.conn {
                if let Some(p) = pend_c {
                    dj_lifted = dj_lifted.max(p.extend(ab.len_cost, ab.len_hops));
                }
            }

            let reach = |from: u32| -> Option<(u64, u32)> {
                if from == junction {
                    Some((0, 0))
                } else if h.conn {
                    Some((h.len_cost, h.len_hops))
                } else {
                    None
                }
            };
            let mut ds = d_at(ht, t.a0);
            if let Some((c, hp)) = reach(t.a0) {
                ds = ds.max(dj_lifted.extend(c, hp));
            }
            let mut dt = d_at(ht, t.a1);
            if let Some((c, hp)) = reach(t.a1) {
                dt = dt.max(dj_lifted.extend(c, hp));
            }
            let mut best = h.best.max(ab.best).max(Best::cross(d_at(ht, junction), dj_lifted));
            if let Some(p) = pend_c {
                best = best.max(Best::cross(dc, p));
            }
            Agg {
                conn: h.conn,
                len_cost: h.len_cost,
                len_hops: h.len_hops,
                d: [ds, dt],
                best,
            }
        }
    }
}

impl EccForest {
    pub fn new(tree: &Tree) -> Self {
        let n = tree.n();
        let m = tree.edges().len();
        let mut ecost = Vec::with_capacity(m);
        let mut eends = Vec::with_capacity(m);
        let mut eid = HashMap::with_capacity(m);
        for (i, &(u, v, w)) in tree.edges().iter().enumerate() {
            ecost.push(w);
            eends.push((u as u32, v as u32));
            eid.insert((u.min(v) as u32, u.max(v) as u32), i as u32);
        }
        let (nodes, leaf_of, internal_at, depth) = Self::build_decomposition(n, &eends);
        let mut this = EccForest {
            n,
            ecost,
            eactive: vec![true; m],
            eends,
            eid,
            leaf_of,
            nodes,
            internal_at,
            depth,
            pendants: vec![None; n],
            aux: Vec::new(),
            free_aux: Vec::new(),
            dirty: Vec::new(),
            pending: Vec::new(),
        };
        for id in (0..this.nodes.len()).rev() {
            this.nodes[id].agg =
                combine(&this.nodes, &this.pendants, &this.eactive, &this.ecost, &this.eends, id);
        }
        this
    }

    /// Round-based greedy contraction into a balanced merge hierarchy, then a
    /// breadth-first relabel so parents precede children in memory. Leaves
    /// rake onto a sibling cluster at their attachment vertex; degree-two
    /// vertices compress their two clusters. Every cluster joins at most one
    /// merge per round, which keeps the hierarchy shallow.
    fn build_decomposition(
        n: usize,
        eends: &[(u32, u32)],
    ) -> (Vec<Node>, Vec<u32>, Vec<u32>, usize) {
        let m = eends.len();
        let mut internal_at_old = vec![NONE; n];
        // Temporary nodes in creation order (children before parents).
        #[derive(Clone, Copy)]
        struct Tmp {
            kind: u8,
            edge: u32,
            vtx: u32,
            internal: u32,
            c0: u32,
            c1: u32,
            a0: u32,
            a1: u32,
        }
        let mut tmp: Vec<Tmp> = (0..m)
            .map(|e| Tmp {
                kind: KIND_LEAF,
                edge: e as u32,
                vtx: NONE,
                internal: NONE,
                c0: NONE,
                c1: NONE,
                a0: eends[e].0,
                a1: eends[e].1,
            })
            .collect();
        let mut height = vec![0u32; m];

        let root_old = if m == 0 {
            NONE
        } else {
            let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
            for (e, &(u, v)) in eends.iter().enumerate() {
                adj[u as usize].push(e as u32);
                adj[v as usize].push(e as u32);
            }
            let mut alive = vec![true; m];
            let mut used = vec![false; m];
            let mut remaining = m;
            let mut verts: Vec<u32> =
                (0..n as u32).filter(|&v| !adj[v as usize].is_empty()).collect();
            let mut cursor = vec![0usize; n];
            while remaining > 1 {
                for &v in &verts {
                    cursor[v as usize] = 0;
                }
                for vi in 0..verts.len() {
                    let v = verts[vi] as usize;
                    adj[v].retain(|&c| alive[c as usize]);
                    match adj[v].len() {
                        1 => {
                            let e = adj[v][0];
                            if used[e as usize] {
                                continue;
                            }
                            let te = tmp[e as usize];
                            let y = if te.a0 as usize == v { te.a1 } else { te.a0 };
                            let ay = &adj[y as usize];
                            let mut host = NONE;
                            let mut cur = cursor[y as usize];
                            while cur < ay.len() {
                                let c = ay[cur];
                                if c != e && alive[c as usize] && !used[c as usize] {
                                    host = c;
                                    break;
                                }
                                cur += 1;
                            }
                            cursor[y as usize] = cur;
                            if host == NONE {
                                continue;
                            }
                            let (a0, a1) = (tmp[host as usize].a0, tmp[host as usize].a1);
                            let id = tmp.len() as u32;
                            tmp.push(Tmp {
                                kind: KIND_RAKE,
                                edge: NONE,
                                vtx: y,
                                internal: v as u32,
                                c0: host,
                                c1: e,
                                a0,
                                a1,
                            });
                            height.push(1 + height[host as usize].max(height[e as usize]));
                            internal_at_old[v] = id;
                            alive[e as usize] = false;
                            alive[host as usize] = false;
                            alive.push(true);
                            used.push(true);
                            adj[a0 as usize].push(id);
                            adj[a1 as usize].push(id);
                            remaining -= 1;
                        }
                        2 => {
                            let (e1, e2) = (adj[v][0], adj[v][1]);
                            if used[e1 as usize] || used[e2 as usize] {
                                continue;
                            }
                            let other =
                                |t: Tmp| if t.a0 as usize == v { t.a1 } else { t.a0 };
                            let a = other(tmp[e1 as usize]);
                            let b = other(tmp[e2 as usize]);
                            let id = tmp.len() as u32;
                            tmp.push(Tmp {
                                kind: KIND_COMPRESS,
                                edge: NONE,
                                vtx: v as u32,
                                internal: NONE,
                                c0: e1,
                                c1: e2,
                                a0: a,
                                a1: b,
                            });
                            height.push(1 + height[e1 as usize].max(height[e2 as usize]));
                            internal_at_old[v] = id;
                            alive[e1 as usize] = false;
                            alive[e2 as usize] = false;
                            alive.push(true);
                            used.push(true);
                            adj[a as usize].push(id);
                            adj[b as usize].push(id);
                            remaining -= 1;
                        }
                        _ => {}
                    }
                }
                for u in used.iter_mut() {
                    *u = false;
                }
                verts.retain(|&v| {
                    adj[v as usize].retain(|&c| alive[c as usize]);
                    !adj[v as usize].is_empty()
                });
            }
            (0..alive.len()).find(|&x| alive[x]).unwrap() as u32
        };

        // Breadth-first relabel from the root.
        let total = tmp.len();
        let mut new_of_old = vec![NONE; total];
        let mut order: Vec<u32> = Vec::with_capacity(total);
        if root_old != NONE {
            order.push(root_old);
            new_of_old[root_old as usize] = 0;
            let mut head = 0;
            while head < order.len() {
                let old = order[head] as usize;
                head += 1;
                for c in [tmp[old].c0, tmp[old].c1] {
                    if c != NONE {
                        new_of_old[c as usize] = order.len() as u32;
                        order.push(c);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), total);
        let blank = Agg {
            conn: false,
            len_cost: 0,
            len_hops: 0,
            d: [Far::seed(0), Far::seed(0)],
            best: Best::single(0),
        };
        let mut nodes: Vec<Node> = Vec::with_capacity(total);
        let mut depth = 0usize;
        for &old in &order {
            let t = tmp[old as usize];
            depth = depth.max(height[old as usize] as usize);
            let map = |x: u32| if x == NONE { NONE } else { new_of_old[x as usize] };
            nodes.push(Node {
                kind: t.kind,
                edge: t.edge,
                vtx: t.vtx,
                internal: t.internal,
                c0: map(t.c0),
                c1: map(t.c1),
                a0: t.a0,
                a1: t.a1,
                parent: NONE, // filled in the second pass
                agg: blank,
            });
        }
        for id in 0..nodes.len() {
            for c in [nodes[id].c0, nodes[id].c1] {
                if c != NONE {
                    nodes[c as usize].parent = id as u32;
                }
            }
        }
        let mut leaf_of = vec![NONE; m];
        for (id, node) in nodes.iter().enumerate() {
            if node.kind == KIND_LEAF {
                leaf_of[node.edge as usize] = id as u32;
            }
        }
        let internal_at = internal_at_old
            .iter()
            .map(|&x| if x == NONE { NONE } else { new_of_old[x as usize] })
            .collect();
        (nodes, leaf_of, internal_at, depth)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn decomposition_depth(&self) -> usize {
        self.depth
    }

    #[inline]
    fn pend(&self, v: u32) -> Option<Far> {
        self.pendants[v as usize].map(|p| Far { cost: p.weight, hops: 1, vertex: p.aux })
    }

    #[inline]
    fn d_at(&self, node: &Node, v: u32) -> Far {
        debug_assert!(node.a0 == v || node.a1 == v);
        if node.a0 == v {
            node.agg.d[0]
        } else {
            node.agg.d[1]
        }
    }

    fn recompute(&mut self, id: usize) {
        self.nodes[id].agg =
            combine(&self.nodes, &self.pendants, &self.eactive, &self.ecost, &self.eends, id);
    }

    fn recompute_from(&mut self, mut node: u32) {
        while node != NONE {
            self.recompute(node as usize);
            node = self.nodes[node as usize].parent;
        }
    }

    /// Recompute after several leaf changes, visiting each affected node
    /// once. Parents precede children in memory, so a descending-id sweep is
    /// bottom-up.
    fn recompute_many(&mut self, starts: impl Iterator<Item = u32>) {
        let mut dirty = std::mem::take(&mut self.dirty);
        dirty.clear();
        for start in starts {
            let mut node = start;
            while node != NONE {
                dirty.push(node);
                node = self.nodes[node as usize].parent;
            }
        }
        dirty.sort_unstable_by(|a, b| b.cmp(a));
        dirty.dedup();
        for &node in &dirty {
            self.recompute(node as usize);
        }
        self.dirty = dirty;
    }

    fn edge_id(&self, u: usize, v: usize) -> Option<u32> {
        self.eid.get(&(u.min(v) as u32, u.max(v) as u32)).copied()
    }

    pub fn is_active(&self, u: usize, v: usize) -> Option<bool> {
        self.edge_id(u, v).map(|e| self.eactive[e as usize])
    }

    /// Deactivate a present base edge.
    pub fn cut(&mut self, u: usize, v: usize) -> Result<()> {
        let e = self.edge_id(u, v).ok_or(Error::CutAbsentEdge(u, v))?;
        if !self.eactive[e as usize] {
            return Err(Error::CutAbsentEdge(u, v));
        }
        self.eactive[e as usize] = false;
        self.recompute_from(self.leaf_of[e as usize]);
        Ok(())
    }

    /// Re-activate an absent base edge, possibly with a new weight.
    pub fn link(&mut self, u: usize, v: usize, w: u64) -> Result<()> {
        let e = self.edge_id(u, v).ok_or(Error::NotBaseEdge(u, v))?;
        if self.eactive[e as usize] {
            return Err(Error::LinkWithinComponent);
        }
        self.eactive[e as usize] = true;
        self.ecost[e as usize] = w;
        self.recompute_from(self.leaf_of[e as usize]);
        Ok(())
    }

    /// Cut a batch of present base edges, recomputing shared paths once.
    pub fn cut_many(&mut self, edges: &[(usize, usize)]) -> Result<()> {
        let mut pending = std::mem::take(&mut self.pending);
        pending.clear();
        for &(u, v) in edges {
            let e = self.edge_id(u, v).ok_or(Error::CutAbsentEdge(u, v))?;
            if !self.eactive[e as usize] {
                self.pending = pending;
                return Err(Error::CutAbsentEdge(u, v));
            }
            self.eactive[e as usize] = false;
            pending.push(self.leaf_of[e as usize]);
        }
        self.recompute_many(pending.iter().copied());
        self.pending = pending;
        Ok(())
    }

    /// Re-activate a batch of absent base edges.
    pub fn link_many(&mut self, edges: &[(usize, usize, u64)]) -> Result<()> {
        let mut pending = std::mem::take(&mut self.pending);
        pending.clear();
        for &(u, v, w) in edges {
            let e = self.edge_id(u, v).ok_or(Error::NotBaseEdge(u, v))?;
            if self.eactive[e as usize] {
                self.pending = pending;
                return Err(Error::LinkWithinComponent);
            }
            self.eactive[e as usize] = true;
            self.ecost[e as usize] = w;
            pending.push(self.leaf_of[e as usize]);
        }
        self.recompute_many(pending.iter().copied());
        self.pending = pending;
        Ok(())
    }

    /// Hang a transient auxiliary vertex off `v` with the given edge weight.
    /// Returns the auxiliary's id (at least `n`).
    pub fn attach_pendant(&mut self, v: usize, w: u64) -> Result<usize> {
        if self.pendants[v].is_some() {
            return Err(Error::PendantOccupied(v));
        }
        let slot = match self.free_aux.pop() {
            Some(s) => s,
            None => {
                self.aux.push(None);
                (self.aux.len() - 1) as u32
            }
        };
        let aux_id = self.n as u32 + slot;
        self.aux[slot as usize] = Some((v as u32, w));
        self.pendants[v] = Some(Pendant { weight: w, aux: aux_id });
        if self.internal_at[v] != NONE {
            self.recompute_from(self.internal_at[v]);
        }
        Ok(aux_id as usize)
    }

    pub fn detach_pendant(&mut self, aux_id: usize) -> Result<()> {
        let slot = aux_id.checked_sub(self.n).ok_or(Error::PendantMissing(aux_id))?;
        let (host, _) =
            self.aux.get(slot).copied().flatten().ok_or(Error::PendantMissing(aux_id))?;
        self.aux[slot] = None;
        self.free_aux.push(slot as u32);
        self.pendants[host as usize] = None;
        if self.internal_at[host as usize] != NONE {
            self.recompute_from(self.internal_at[host as usize]);
        }
        Ok(())
    }

    /// Farthest vertex from `v` within its component, with tie-breaking by
    /// hop count and then by vertex id. `v` may be an auxiliary id.
    pub fn eccentricity(&self, v: usize) -> TieDist {
        let far = if v >= self.n {
            let slot = v - self.n;
            let (host, w) = self.aux[slot].expect("live auxiliary vertex");
            let inner = self.ecc_real(host as usize, false);
            inner.extend(w, 1)
        } else {
            self.ecc_real(v, true)
        };
        TieDist { cost: far.cost, hops: far.hops, vertex: far.vertex as usize }
    }

    fn ecc_real(&self, v: usize, include_own_pendant: bool) -> Far {
        let vu = v as u32;
        let own_pendant = if include_own_pendant { self.pend(vu) } else { None };
        let mut best = Far::seed(vu);
        if let Some(p) = own_pendant {
            best = best.max(p);
        }
        if self.nodes.is_empty() {
            return best;
        }

        // Walk state over the current cluster: distance from v to each anchor
        // of the cluster when v's piece reaches it, plus the best so far.
        let mut da: Option<(u64, u32)>;
        let mut db: Option<(u64, u32)>;
        let mut cur: u32;

        let start = self.internal_at[v];
        if start == NONE {
            // v is an anchor of the root cluster.
            cur = 0;
            let t = &self.nodes[0];
            debug_assert!(t.a0 == vu || t.a1 == vu);
            let reach = if t.agg.conn { Some((t.agg.len_cost, t.agg.len_hops)) } else { None };
            if t.a0 == vu {
                da = Some((0, 0));
                db = reach;
            } else {
                da = reach;
                db = Some((0, 0));
            }
            best = best.max(self.d_at(t, vu));
        } else {
            cur = start;
            let t = self.nodes[cur as usize];
            let c0 = &self.nodes[t.c0 as usize];
            let c1 = &self.nodes[t.c1 as usize];
            match t.kind {
                KIND_COMPRESS => {
                    debug_assert_eq!(t.vtx, vu);
                    da = c0.agg.conn.then_some((c0.agg.len_cost, c0.agg.len_hops));
                    db = c1.agg.conn.then_some((c1.agg.len_cost, c1.agg.len_hops));
                    best = best.max(self.d_at(c0, vu)).max(self.d_at(c1, vu));
                }
                KIND_RAKE => {
                    debug_assert_eq!(t.internal, vu);
                    let junction = t.vtx;
                    best = best.max(self.d_at(c1, vu));
                    let to_j = c1.agg.conn.then_some((c1.agg.len_cost, c1.agg.len_hops));
                    if let Some((c, hp)) = to_j {
                        best = best.max(self.d_at(c0, junction).extend(c, hp));
                    }
                    let through = |target: u32| -> Option<(u64, u32)> {
                        let (c, hp) = to_j?;
                        if junction == target {
                            Some((c, hp))
                        } else if c0.agg.conn {
                            Some((c + c0.agg.len_cost, hp + c0.agg.len_hops))
                        } else {
                            None
                        }
                    };
                    da = through(t.a0);
                    db = through(t.a1);
                }
                _ => unreachable!("vertices internalize at merge nodes"),
            }
        }

        // Climb to the root, folding in the sibling at each merge.
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NONE {
                break;
            }
            let pt = &self.nodes[p as usize];
            let first_child = pt.c0 == cur;
            let sib = &self.nodes[if first_child { pt.c1 } else { pt.c0 } as usize];
            let cur_t = &self.nodes[cur as usize];
            match pt.kind {
                KIND_COMPRESS => {
                    let mid = pt.vtx;
                    let (dm, dother) = if cur_t.a0 == mid { (da, db) } else { (db, da) };
                    let mut new_best = best;
                    if let Some((c, hp)) = dm {
                        new_best = new_best.max(self.d_at(sib, mid).extend(c, hp));
                        if let Some(pd) = self.pend(mid) {
                            new_best = new_best.max(pd.extend(c, hp));
                        }
                    }
                    let through = dm.and_then(|(c, hp)| {
                        sib.agg.conn.then_some((c + sib.agg.len_cost, hp + sib.agg.len_hops))
                    });
                    // Parent anchor order follows child order.
                    if first_child {
                        da = dother;
                        db = through;
                    } else {
                        da = through;
                        db = dother;
                    }
                    best = new_best;
                }
                KIND_RAKE => {
                    let junction = pt.vtx;
                    if first_child {
                        // We are the host; anchors unchanged.
                        let dj = if cur_t.a0 == junction { da } else { db };
                        if let Some((c, hp)) = dj {
                            best = best.max(self.d_at(sib, junction).extend(c, hp));
                            if sib.agg.conn {
                                if let Some(pd) = self.pend(pt.internal) {
                                    best = best.max(
                                        pd.extend(c + sib.agg.len_cost, hp + sib.agg.len_hops),
                                    );
                                }
                            }
                        }
                    } else {
                        // We are the absorbed pendant cluster.
                        let (dc, dj) = if cur_t.a0 == pt.internal { (da, db) } else { (db, da) };
                        let mut new_best = best;
                        if let Some((c, hp)) = dj {
                            new_best = new_best.max(self.d_at(sib, junction).extend(c, hp));
                        }
                        if let Some((c, hp)) = dc {
                            if let Some(pd) = self.pend(pt.internal) {
                                new_best = new_best.max(pd.extend(c, hp));
                            }
                        }
                        let through = |target: u32| -> Option<(u64, u32)> {
                            let (c, hp) = dj?;
                            if junction == target {
                                Some((c, hp))
                            } else if sib.agg.conn {
                                Some((c + sib.agg.len_cost, hp + sib.agg.len_hops))
                            } else {
                                None
                            }
                        };
                        da = through(pt.a0);
                        db = through(pt.a1);
                        best = new_best;
                    }
                }
                _ => unreachable!(),
            }
            cur = p;
        }

        // Root anchors never internalize; account for their pendants here.
        let rt = &self.nodes[cur as usize];
        for (anchor, dist) in [(rt.a0, da), (rt.a1, db)] {
            if anchor == vu && !include_own_pendant {
                continue;
            }
            if let (Some((c, hp)), Some(pd)) = (dist, self.pend(anchor)) {
                best = best.max(pd.extend(c, hp));
            }
        }
        best
    }

    /// Diameter of the component containing `v` (two farthest sweeps), with a
    /// witness pair. Auxiliary pendants count as component vertices.
    pub fn component_diameter(&self, v: usize) -> (u64, (usize, usize)) {
        let first = self.eccentricity(v);
        let second = self.eccentricity(first.vertex);
        (second.cost, (first.vertex, second.vertex))
    }
}
