//! Closest-marked-ancestor queries over a static rooted tree: heavy-path
//! decomposition with one global multi-level bitset over the concatenated
//! paths. Marks and queries touch a constant number of words per path hop.

use crate::index::StaticTreeIndex;

/// Hierarchical bitset: each level summarizes which words of the level below
/// are nonzero, so "highest set position at most p" needs one word probe per
/// level going up and one per level going down.
#[derive(Debug, Clone)]
struct HiBits {
    levels: Vec<Vec<u64>>,
}

impl HiBits {
    fn new(len: usize) -> Self {
        let mut levels = Vec::new();
        let mut size = len.max(1);
        loop {
            size = size.div_ceil(64);
            levels.push(vec![0u64; size]);
            if size == 1 {
                break;
            }
        }
        HiBits { levels }
    }

    fn set(&mut self, mut pos: usize) {
        for level in &mut self.levels {
            let (w, b) = (pos / 64, pos % 64);
            level[w] |= 1 << b;
            pos = w;
        }
    }

    fn clear(&mut self, mut pos: usize) {
        for level in &mut self.levels {
            let (w, b) = (pos / 64, pos % 64);
            level[w] &= !(1 << b);
            if level[w] != 0 {
                break;
            }
            pos = w;
        }
    }

    /// Highest set position at most `pos`.
    fn highest_le(&self, pos: usize) -> Option<usize> {
        let hi = |word: u64| 63 - word.leading_zeros() as usize;
        let mut p = pos;
        let mut lvl = 0;
        loop {
            let (w, b) = (p / 64, p % 64);
            let mask = if b == 63 { u64::MAX } else { (1u64 << (b + 1)) - 1 };
            let m = self.levels[lvl][w] & mask;
            if m != 0 {
                let mut idx = w * 64 + hi(m);
                while lvl > 0 {
                    lvl -= 1;
                    debug_assert_ne!(self.levels[lvl][idx], 0);
                    idx = idx * 64 + hi(self.levels[lvl][idx]);
                }
                return Some(idx);
            }
            // No candidate in this word; ask the summary level for the
            // highest nonzero word strictly below.
            if w == 0 || lvl + 1 == self.levels.len() {
                return None;
            }
            p = w - 1;
            lvl += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct MarkedAncestors {
    root: usize,
    parent: Vec<u32>,
    /// Concatenated heavy-path position of each vertex; positions within a
    /// path increase with depth.
    global: Vec<u32>,
    /// First global position of the path containing each vertex.
    path_start: Vec<u32>,
    /// Vertex at each global position.
    by_global: Vec<u32>,
    bits: HiBits,
    marked: Vec<bool>,
}

impl MarkedAncestors {
    pub fn build(index: &StaticTreeIndex) -> Self {
        let n = index.n();
        let root = index.root();
        let mut size = vec![1u32; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &c in index.children(u) {
                stack.push(c as usize);
            }
        }
        for &u in order.iter().rev() {
            for &c in index.children(u) {
                size[u] += size[c as usize];
            }
        }
        let mut global = vec![u32::MAX; n];
        let mut path_start = vec![0u32; n];
        let mut by_global = vec![0u32; n];
        let mut next = 0u32;
        for &u in &order {
            if global[u] != u32::MAX {
                continue;
            }
            let start = next;
            let mut cur = u;
            loop {
                global[cur] = next;
                path_start[cur] = start;
                by_global[next as usize] = cur as u32;
                next += 1;
                let heavy =
                    index.children(cur).iter().copied().max_by_key(|&c| size[c as usize]);
                match heavy {
                    Some(c) => cur = c as usize,
                    None => break,
                }
            }
        }
        MarkedAncestors {
            root,
            parent: (0..n).map(|v| index.parent(v) as u32).collect(),
            global,
            path_start,
            by_global,
            bits: HiBits::new(n),
            marked: vec![false; n],
        }
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked[v]
    }

    pub fn mark(&mut self, v: usize) {
        assert!(!self.marked[v], "vertex {v} already marked");
        self.marked[v] = true;
        self.bits.set(self.global[v] as usize);
    }

    pub fn unmark(&mut self, v: usize) {
        assert!(self.marked[v], "vertex {v} not marked");
        self.marked[v] = false;
        self.bits.clear(self.global[v] as usize);
    }

    /// The nearest strict ancestor of v that is marked, if any.
    pub fn closest_marked_ancestor(&self, v: usize) -> Option<usize> {
        if v == self.root {
            return None;
        }
        let mut u = self.parent[v] as usize;
        loop {
            let start = self.path_start[u];
            if let Some(g) = self.bits.highest_le(self.global[u] as usize) {
                if g as u32 >= start {
                    return Some(self.by_global[g] as usize);
                }
            }
            let head = self.by_global[start as usize] as usize;
            if head == self.root {
                return None;
            }
            u = self.parent[head] as usize;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Tree;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hibits_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &len in &[1usize, 5, 64, 65, 4097, 300_000] {
            let mut hi = HiBits::new(len);
            let mut naive = vec![false; len];
            for _ in 0..600 {
                let pos = rng.random_range(0..len);
                match rng.random_range(0..3) {
                    0 => {
                        hi.set(pos);
                        naive[pos] = true;
                    }
                    1 => {
                        hi.clear(pos);
                        naive[pos] = false;
                    }
                    _ => {
                        let want = (0..=pos).rev().find(|&p| naive[p]);
                        assert_eq!(hi.highest_le(pos), want, "len {len} pos {pos}");
                    }
                }
            }
        }
    }

    fn naive_cma(parent: &[u32], marked: &[bool], root: usize, v: usize) -> Option<usize> {
        let mut u = v;
        while u != root {
            u = parent[u] as usize;
            if marked[u] {
                return Some(u);
            }
        }
        None
    }

    #[test]
    fn only_root_marked() {
        let t = Tree::new(5, vec![(0, 1, 1), (1, 2, 1), (1, 3, 1), (3, 4, 1)]).unwrap();
        let idx = StaticTreeIndex::build(&t);
        let mut m = MarkedAncestors::build(&idx);
        for v in 1..5 {
            assert_eq!(m.closest_marked_ancestor(v), None);
        }
        m.mark(0);
        for v in 1..5 {
            assert_eq!(m.closest_marked_ancestor(v), Some(0));
        }
        assert_eq!(m.closest_marked_ancestor(0), None);
    }

    #[test]
    fn random_mark_sets_match_parent_walk() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.random_range(2..1000);
            let edges = (1..n).map(|v| (rng.random_range(0..v), v, 1u64)).collect();
            let t = Tree::new(n, edges).unwrap();
            let idx = StaticTreeIndex::build(&t);
            let mut m = MarkedAncestors::build(&idx);
            let parent: Vec<u32> = (0..n).map(|v| idx.parent(v) as u32).collect();
            let mut marked = vec![false; n];
            for _ in 0..500 {
                let v = rng.random_range(0..n);
                match rng.random_range(0..3) {
                    0 if !marked[v] => {
                        m.mark(v);
                        marked[v] = true;
                    }
                    1 if marked[v] => {
                        m.unmark(v);
                        marked[v] = false;
                    }
                    _ => {
                        assert_eq!(
                            m.closest_marked_ancestor(v),
                            naive_cma(&parent, &marked, 0, v)
                        );
                    }
                }
            }
        }
    }
}
