//! Static tree oracles: constant-time LCA and distance queries, logarithmic
//! level-ancestor and path-vertex queries, after O(n log n) preprocessing.

use crate::error::{Error, Result};
use crate::tree::Tree;

#[derive(Debug, Clone)]
pub struct StaticTreeIndex {
    root: usize,
    parent: Vec<u32>,
    children: Vec<Vec<u32>>,
    depth: Vec<u32>,
    dist: Vec<u64>,
    euler_pos: Vec<u32>,
    euler: Vec<u32>,
    /// sparse[j][i] = euler position with minimum depth in [i, i + 2^j).
    sparse: Vec<Vec<u32>>,
    /// up[j][v] = 2^j-th ancestor of v (saturating at the root).
    up: Vec<Vec<u32>>,
}

impl StaticTreeIndex {
    pub fn build(tree: &Tree) -> Self {
        let n = tree.n();
        let root = tree.root();
        let mut parent = vec![0u32; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0u32; n];
        let mut dist = vec![0u64; n];
        let mut euler_pos = vec![0u32; n];
        let mut euler = Vec::with_capacity(2 * n - 1);

        // Iterative DFS writing the Euler tour: a vertex is appended on first
        // visit and again after each child subtree.
        parent[root] = root as u32;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut seen = vec![false; n];
        seen[root] = true;
        euler_pos[root] = 0;
        euler.push(root as u32);
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let nbrs = tree.neighbors(u);
            let mut advanced = false;
            while *next < nbrs.len() {
                let (v, w) = nbrs[*next];
                *next += 1;
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u as u32;
                    children[u].push(v as u32);
                    depth[v] = depth[u] + 1;
                    dist[v] = dist[u] + w;
                    euler_pos[v] = euler.len() as u32;
                    euler.push(v as u32);
                    stack.push((v, 0));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p as u32);
                }
            }
        }
        debug_assert_eq!(euler.len(), 2 * n - 1);

        let m = euler.len();
        let levels = usize::BITS as usize - (m.max(1)).leading_zeros() as usize;
        let mut sparse: Vec<Vec<u32>> = Vec::with_capacity(levels);
        sparse.push((0..m as u32).collect());
        let key = |pos: u32| depth[euler[pos as usize] as usize];
        for j in 1..levels {
            let half = 1usize << (j - 1);
            let prev = &sparse[j - 1];
            let width = m + 1 - (1 << j);
            let mut row = Vec::with_capacity(width);
            for i in 0..width {
                let a = prev[i];
                let b = prev[i + half];
                row.push(if key(a) <= key(b) { a } else { b });
            }
            sparse.push(row);
        }

        let lift_levels = (usize::BITS - n.leading_zeros()) as usize;
        let mut up: Vec<Vec<u32>> = Vec::with_capacity(lift_levels);
        up.push(parent.clone());
        for j in 1..lift_levels.max(1) {
            let prev = &up[j - 1];
            up.push((0..n).map(|v| prev[prev[v] as usize]).collect());
        }

        StaticTreeIndex { root, parent, children, depth, dist, euler_pos, euler, sparse, up }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v] as usize
    }

    pub fn children(&self, v: usize) -> &[u32] {
        &self.children[v]
    }

    pub fn depth_hops(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn dist_to_root(&self, v: usize) -> u64 {
        self.dist[v]
    }

    /// Deepest common ancestor of u and v.
    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (mut a, mut b) = (self.euler_pos[u], self.euler_pos[v]);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let len = (b - a + 1) as usize;
        let j = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let row = &self.sparse[j];
        let x = row[a as usize];
        let y = row[b as usize + 1 - (1 << j)];
        let pos = if self.depth[self.euler[x as usize] as usize] <= self.depth[self.euler[y as usize] as usize] {
            x
        } else {
            y
        };
        self.euler[pos as usize] as usize
    }

    /// The ancestor of v at hop-distance `hops` above it.
    pub fn level_ancestor(&self, v: usize, hops: u32) -> Result<usize> {
        if hops > self.depth[v] {
            return Err(Error::LevelOutOfRange { requested: hops, depth: self.depth[v] });
        }
        Ok(self.level_ancestor_unchecked(v, hops))
    }

    fn level_ancestor_unchecked(&self, v: usize, hops: u32) -> usize {
        let mut v = v;
        let mut h = hops;
        while h > 0 {
            let j = h.trailing_zeros() as usize;
            v = self.up[j][v] as usize;
            h &= h - 1;
        }
        v
    }

    /// Exact tree distance and edge count between u and v.
    pub fn dist_hops(&self, u: usize, v: usize) -> (u64, u32) {
        let w = self.lca(u, v);
        (
            self.dist[u] + self.dist[v] - 2 * self.dist[w],
            self.depth[u] + self.depth[v] - 2 * self.depth[w],
        )
    }

    /// Highest ancestor of `v` that still satisfies `pred`, among ancestors
    /// strictly deeper than `min_depth_exclusive`. Requires `pred(v)` to hold
    /// and `pred` to be monotone along the ancestor chain (once false going
    /// up, it stays false). Runs in O(log n).
    pub fn lift_while<F: Fn(usize) -> bool>(
        &self,
        v: usize,
        min_depth_exclusive: u32,
        pred: F,
    ) -> usize {
        debug_assert!(self.depth[v] > min_depth_exclusive);
        let mut cur = v;
        for j in (0..self.up.len()).rev() {
            let a = self.up[j][cur] as usize;
            if self.depth[a] > min_depth_exclusive && pred(a) {
                cur = a;
            }
        }
        cur
    }

    /// The i-th vertex (1-based) on the unique path from u to v.
    pub fn path_vertex(&self, u: usize, v: usize, i: usize) -> Result<usize> {
        let w = self.lca(u, v);
        let up_len = self.depth[u] - self.depth[w];
        let total = up_len + self.depth[v] - self.depth[w];
        if i == 0 || i > total as usize + 1 {
            return Err(Error::PathIndexOutOfRange { index: i, len: total as usize + 1 });
        }
        let steps = (i - 1) as u32;
        if steps <= up_len {
            Ok(self.level_ancestor_unchecked(u, steps))
        } else {
            Ok(self.level_ancestor_unchecked(v, total - steps))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
        let edges = (1..n)
            .map(|v| (rng.random_range(0..v), v, rng.random_range(0..100u64)))
            .collect();
        Tree::new(n, edges).unwrap()
    }

    struct NaiveIndex {
        parent: Vec<usize>,
        depth: Vec<u32>,
    }

    impl NaiveIndex {
        fn build(tree: &Tree) -> Self {
            let (parent, _) = tree.rooted_children();
            let root = tree.root();
            let parent: Vec<usize> = (0..tree.n()).map(|v| parent[v].unwrap_or(root)).collect();
            let mut depth = vec![0u32; tree.n()];
            let mut order: Vec<usize> = (0..tree.n()).collect();
            // Relax depths until stable; fine for tests.
            for _ in 0..tree.n() {
                for &v in &order {
                    if v != root {
                        depth[v] = depth[parent[v]] + 1;
                    }
                }
            }
            order.clear();
            NaiveIndex { parent, depth }
        }

        fn lca(&self, mut u: usize, mut v: usize) -> usize {
            while self.depth[u] > self.depth[v] {
                u = self.parent[u];
            }
            while self.depth[v] > self.depth[u] {
                v = self.parent[v];
            }
            while u != v {
                u = self.parent[u];
                v = self.parent[v];
            }
            u
        }

        fn level_ancestor(&self, mut v: usize, hops: u32) -> usize {
            for _ in 0..hops {
                v = self.parent[v];
            }
            v
        }

        fn path(&self, u: usize, v: usize) -> Vec<usize> {
            let w = self.lca(u, v);
            let mut left = vec![u];
            let mut x = u;
            while x != w {
                x = self.parent[x];
                left.push(x);
            }
            let mut right = vec![v];
            let mut x = v;
            while x != w {
                x = self.parent[x];
                right.push(x);
            }
            right.pop();
            right.reverse();
            left.extend(right);
            left
        }
    }

    #[test]
    fn lca_on_tiny_path() {
        let t = Tree::new(3, vec![(0, 1, 5), (1, 2, 7)]).unwrap();
        let idx = StaticTreeIndex::build(&t);
        assert_eq!(idx.lca(1, 2), 1);
        assert_eq!(idx.lca(0, 2), 0);
        assert_eq!(idx.lca(2, 2), 2);
        assert_eq!(idx.dist_hops(0, 2), (12, 2));
        assert_eq!(idx.dist_hops(1, 1), (0, 0));
    }

    #[test]
    fn queries_match_naive_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..10 {
            let n = rng.random_range(2..400);
            let t = random_tree(n, &mut rng);
            let idx = StaticTreeIndex::build(&t);
            let naive = NaiveIndex::build(&t);
            for _ in 0..500 {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                assert_eq!(idx.lca(u, v), naive.lca(u, v), "trial {trial} lca({u},{v})");
                let l = rng.random_range(0..=idx.depth_hops(u));
                assert_eq!(idx.level_ancestor(u, l).unwrap(), naive.level_ancestor(u, l));
                let path = naive.path(u, v);
                let i = rng.random_range(1..=path.len());
                assert_eq!(idx.path_vertex(u, v, i).unwrap(), path[i - 1]);
                // Consecutive path vertices are tree edges.
                let (cost, hops) = idx.dist_hops(u, v);
                assert_eq!(hops as usize + 1, path.len());
                let step_sum: u64 = path.windows(2).map(|w| idx.dist_hops(w[0], w[1]).0).collect::<Vec<_>>().iter().sum();
                assert_eq!(step_sum, cost);
            }
            assert_eq!(idx.level_ancestor(0, 1).unwrap_err().to_string().contains("out of range"), true);
        }
    }

    #[test]
    fn identity_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_tree(50, &mut rng);
        let idx = StaticTreeIndex::build(&t);
        for v in 0..50 {
            assert_eq!(idx.lca(v, v), v);
            assert_eq!(idx.level_ancestor(v, 0).unwrap(), v);
            assert_eq!(idx.level_ancestor(v, idx.depth_hops(v)).unwrap(), t.root());
            assert_eq!(idx.path_vertex(v, v, 1).unwrap(), v);
        }
    }
}
