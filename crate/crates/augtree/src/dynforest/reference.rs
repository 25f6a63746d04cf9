//! Reference implementations with linear-time queries. These are the test
//! oracles the fast structures are shadowed against; production code paths
//! never use them.

use std::collections::{BTreeMap, BTreeSet};

use crate::farthest::TieDist;
use crate::tree::Tree;

/// Undirected dynamic forest tracked as an edge set.
#[derive(Debug, Clone, Default)]
pub struct NaiveForest {
    vertices: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl NaiveForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices.insert(v);
    }

    pub fn remove_vertex(&mut self, v: usize) {
        self.vertices.remove(&v);
    }

    pub fn link(&mut self, u: usize, v: usize) {
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn cut(&mut self, u: usize, v: usize) {
        self.edges.remove(&(u.min(v), u.max(v)));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn component_of(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([v]);
        let mut queue = vec![v];
        while let Some(u) = queue.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && seen.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
        seen
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.component_of(u).contains(&v)
    }
}

/// Marked-ancestor queries by walking parent pointers.
#[derive(Debug, Clone)]
pub struct NaiveMarked {
    parent: Vec<usize>,
    root: usize,
    pub marked: Vec<bool>,
}

impl NaiveMarked {
    pub fn new(tree: &Tree) -> Self {
        let (parent, _) = tree.rooted_children();
        let root = tree.root();
        NaiveMarked {
            parent: (0..tree.n()).map(|v| parent[v].unwrap_or(root)).collect(),
            root,
            marked: vec![false; tree.n()],
        }
    }

    pub fn closest_marked_ancestor(&self, v: usize) -> Option<usize> {
        let mut u = v;
        while u != self.root {
            u = self.parent[u];
            if self.marked[u] {
                return Some(u);
            }
        }
        None
    }
}

/// Eccentricity forest backed by adjacency maps and full traversals.
/// Pendant auxiliaries get ids at `n` and beyond, mirroring the fast
/// structure's tie-breaking exactly.
#[derive(Debug, Clone)]
pub struct NaiveEccForest {
    n: usize,
    adj: BTreeMap<usize, Vec<(usize, u64)>>,
    next_aux: usize,
}

impl NaiveEccForest {
    pub fn new(tree: &Tree) -> Self {
        let mut adj: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        for v in 0..tree.n() {
            adj.insert(v, Vec::new());
        }
        for &(u, v, w) in tree.edges() {
            adj.get_mut(&u).unwrap().push((v, w));
            adj.get_mut(&v).unwrap().push((u, w));
        }
        NaiveEccForest { n: tree.n(), adj, next_aux: tree.n() }
    }

    pub fn cut(&mut self, u: usize, v: usize) {
        self.adj.get_mut(&u).unwrap().retain(|&(x, _)| x != v);
        self.adj.get_mut(&v).unwrap().retain(|&(x, _)| x != u);
    }

    pub fn link(&mut self, u: usize, v: usize, w: u64) {
        self.adj.get_mut(&u).unwrap().push((v, w));
        self.adj.get_mut(&v).unwrap().push((u, w));
    }

    pub fn attach_pendant(&mut self, v: usize, w: u64) -> usize {
        let aux = self.next_aux;
        self.next_aux += 1;
        self.attach_pendant_with_id(aux, v, w);
        aux
    }

    /// Attach under a caller-chosen auxiliary id, so shadow tests can mirror
    /// the fast structure's id assignment.
    pub fn attach_pendant_with_id(&mut self, aux: usize, v: usize, w: u64) {
        assert!(aux >= self.n && !self.adj.contains_key(&aux));
        self.adj.insert(aux, Vec::new());
        self.link(v, aux, w);
    }

    pub fn detach_pendant(&mut self, aux: usize) {
        let nbrs = self.adj.remove(&aux).unwrap_or_default();
        for (v, _) in nbrs {
            self.adj.get_mut(&v).unwrap().retain(|&(x, _)| x != aux);
        }
    }

    pub fn eccentricity(&self, v: usize) -> TieDist {
        let mut best = TieDist { cost: 0, hops: 0, vertex: v };
        let mut stack = vec![(v, v, 0u64, 0u32)];
        while let Some((u, from, cost, hops)) = stack.pop() {
            best = best.max(TieDist { cost, hops, vertex: u });
            for &(x, w) in &self.adj[&u] {
                if x != from {
                    stack.push((x, u, cost + w, hops + 1));
                }
            }
        }
        best
    }

    pub fn component_diameter(&self, v: usize) -> (u64, (usize, usize)) {
        let first = self.eccentricity(v);
        let second = self.eccentricity(first.vertex);
        (second.cost, (first.vertex, second.vertex))
    }
}
