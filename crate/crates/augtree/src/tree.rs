//! Edge-weighted trees and the binarization transform.

use crate::error::{Error, Result};

/// Total edge cost (and every single cost) must stay below this so that any
/// sum of two distances fits in a u64 without overflow.
pub const COST_BUDGET: u64 = 1 << 62;

/// A rooted edge-weighted tree on vertices `0..n`.
///
/// Immutable after construction. Costs are non-negative integers whose total
/// stays below [`COST_BUDGET`] so all distance arithmetic is exact in `u64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    root: Option<usize>,
    adj: Vec<Vec<(usize, u64)>>,
}

impl Tree {
    pub fn new(n: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        Self::with_root(n, edges, None)
    }

    pub fn with_root(n: usize, edges: Vec<(usize, usize, u64)>, root: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("trees must have at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "expected {} edges for {} vertices, got {}",
                n - 1,
                n,
                edges.len()
            )));
        }
        if let Some(r) = root {
            if r >= n {
                return Err(Error::InvalidTree(format!("root {r} out of range")));
            }
        }
        let mut total: u64 = 0;
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if w >= COST_BUDGET {
                return Err(Error::InvalidTree(format!("edge cost {w} exceeds the 2^62 budget")));
            }
            total = total
                .checked_add(w)
                .filter(|&t| t < COST_BUDGET)
                .ok_or_else(|| Error::InvalidTree("total edge cost exceeds the 2^62 budget".into()))?;
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        // Connectivity: n-1 edges and all vertices reachable from 0.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        Ok(Tree { n, edges, root, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// The designated root, falling back to vertex 0.
    pub fn root(&self) -> usize {
        self.root.unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn total_cost(&self) -> u64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    pub fn leaves(&self) -> Vec<usize> {
        if self.n == 1 {
            return vec![0];
        }
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Internal vertices of degree at least 3.
    pub fn branch_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) >= 3).collect()
    }

    pub fn is_path(&self) -> bool {
        self.n <= 2 || (0..self.n).all(|v| self.degree(v) <= 2)
    }

    /// Children lists with respect to the designated root.
    pub fn rooted_children(&self) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
        let root = self.root();
        let mut parent = vec![None; self.n];
        let mut children = vec![Vec::new(); self.n];
        let mut stack = vec![root];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    children[u].push(v);
                    stack.push(v);
                }
            }
        }
        (parent, children)
    }

    /// True when every vertex has at most two children under the designated root.
    pub fn is_binary(&self) -> bool {
        let (_, children) = self.rooted_children();
        children.iter().all(|c| c.len() <= 2)
    }
}

/// Result of [`binarize`]: the transformed tree plus the vertex maps.
///
/// Original vertices keep their ids, so the original-to-new map is the
/// identity on `0..original_n`; gadget vertices get fresh ids at the end.
/// `anchor` maps every new-tree vertex to the original vertex at tree
/// distance zero from it (itself for originals, the gadget root otherwise).
#[derive(Debug, Clone)]
pub struct Binarized {
    pub tree: Tree,
    pub anchor: Vec<usize>,
    original_n: usize,
}

impl Binarized {
    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn added(&self) -> usize {
        self.tree.n() - self.original_n
    }

    /// Map from an original vertex id to its id in the binarized tree.
    pub fn new_id(&self, original: usize) -> usize {
        debug_assert!(original < self.original_n);
        original
    }

    /// The original vertex at distance zero from `v` in the new tree.
    pub fn anchor_of(&self, v: usize) -> usize {
        self.anchor[v]
    }
}

/// Replace every vertex with more than two children by a zero-cost full
/// binary gadget, preserving all pairwise distances between original
/// vertices. A vertex with h >= 3 children contributes 2h-2 new vertices.
pub fn binarize(tree: &Tree) -> Binarized {
    let n = tree.n();
    let (_, children) = tree.rooted_children();
    let cost_of = |u: usize, v: usize| -> u64 {
        tree.neighbors(u)
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, c)| c)
            .expect("child edge must exist")
    };

    let mut edges: Vec<(usize, usize, u64)> = Vec::with_capacity(tree.n() * 3);
    let mut anchor: Vec<usize> = (0..n).collect();
    let mut next = n;

    for v in 0..n {
        let kids = &children[v];
        if kids.len() <= 2 {
            for &c in kids {
                edges.push((v, c, cost_of(v, c)));
            }
            continue;
        }
        // Full binary gadget rooted at v with one leaf per child; internal
        // edges cost 0, leaf-to-child edges keep the original cost.
        let h = kids.len();
        let mut fresh = |a: usize| -> usize {
            let id = next;
            next += 1;
            anchor.push(a);
            id
        };
        // Ranges of kids, split until singletons; (node, lo, hi).
        let mut queue = vec![(v, 0usize, h)];
        while let Some((node, lo, hi)) = queue.pop() {
            debug_assert!(hi - lo >= 2);
            let mid = lo + (hi - lo) / 2;
            for (a, b) in [(lo, mid), (mid, hi)] {
                if b - a == 1 {
                    let leaf = fresh(v);
                    edges.push((node, leaf, 0));
                    edges.push((leaf, kids[a], cost_of(v, kids[a])));
                } else {
                    let inner = fresh(v);
                    edges.push((node, inner, 0));
                    queue.push((inner, a, b));
                }
            }
        }
    }

    let tree = Tree::with_root(next, edges, Some(tree.root())).expect("binarize output is a valid tree");
    debug_assert!(tree.is_binary());
    Binarized { tree, anchor, original_n: n }
}
