//! A rooted dynamic forest over a bounded id space, used to hold the shrunk
//! tree. Vertices are added and removed explicitly; links attach a component
//! root under a vertex of another component.

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct NodeRec {
    present: bool,
    parent: u32,
    children: [u32; 2],
    extra_children: Vec<u32>,
}

impl NodeRec {
    fn child_count(&self) -> usize {
        self.children.iter().filter(|&&c| c != NONE).count() + self.extra_children.len()
    }
}

/// Rooted forest with O(1) structural updates. Ids must stay below the
/// capacity given at construction. The two-slot child storage is sized for
/// shrunk trees of binary trees; higher degrees spill into a vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicForest {
    nodes: Vec<NodeRec>,
    live: Vec<u32>,
    live_pos: Vec<u32>,
}

impl DynamicForest {
    pub fn with_capacity(max_ids: usize) -> Self {
        DynamicForest {
            nodes: vec![
                NodeRec { present: false, parent: NONE, children: [NONE; 2], extra_children: Vec::new() };
                max_ids
            ],
            live: Vec::new(),
            live_pos: vec![NONE; max_ids],
        }
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.nodes.len() && self.nodes[v].present
    }

    pub fn add_vertex(&mut self, v: usize) -> Result<()> {
        if v >= self.nodes.len() {
            return Err(Error::ForestVertex("vertex id beyond capacity"));
        }
        if self.nodes[v].present {
            return Err(Error::ForestVertex("vertex already present"));
        }
        self.nodes[v].present = true;
        self.live_pos[v] = self.live.len() as u32;
        self.live.push(v as u32);
        Ok(())
    }

    /// Remove an isolated vertex.
    pub fn remove_vertex(&mut self, v: usize) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::ForestVertex("vertex not present"));
        }
        let rec = &self.nodes[v];
        if rec.parent != NONE || rec.child_count() != 0 {
            return Err(Error::ForestVertex("vertex not isolated"));
        }
        self.nodes[v].present = false;
        let pos = self.live_pos[v] as usize;
        let last = *self.live.last().unwrap();
        self.live.swap_remove(pos);
        if pos < self.live.len() {
            self.live_pos[last as usize] = pos as u32;
        }
        self.live_pos[v] = NONE;
        Ok(())
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.nodes[v].parent;
        (p != NONE).then_some(p as usize)
    }

    /// Children of v; the callback form avoids allocating.
    pub fn for_each_child<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &c in &self.nodes[v].children {
            if c != NONE {
                f(c as usize);
            }
        }
        for &c in &self.nodes[v].extra_children {
            f(c as usize);
        }
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        self.for_each_child(v, |c| out.push(c));
        out
    }

    pub fn component_root(&self, mut v: usize) -> usize {
        while self.nodes[v].parent != NONE {
            v = self.nodes[v].parent as usize;
        }
        v
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.component_root(u) == self.component_root(v)
    }

    /// Attach the component root `child` under `parent`.
    pub fn link(&mut self, parent: usize, child: usize) -> Result<()> {
        if !self.contains(parent) || !self.contains(child) {
            return Err(Error::ForestVertex("link endpoint not present"));
        }
        if self.nodes[child].parent != NONE {
            return Err(Error::LinkNotRoot(child));
        }
        if self.component_root(parent) == child {
            return Err(Error::LinkWithinComponent);
        }
        self.nodes[child].parent = parent as u32;
        let rec = &mut self.nodes[parent];
        if let Some(slot) = rec.children.iter_mut().find(|c| **c == NONE) {
            *slot = child as u32;
        } else {
            rec.extra_children.push(child as u32);
        }
        Ok(())
    }

    pub fn cut(&mut self, parent: usize, child: usize) -> Result<()> {
        let ok = self.contains(child)
            && self.contains(parent)
            && self.nodes[child].parent == parent as u32;
        if !ok {
            return Err(Error::CutAbsentEdge(parent, child));
        }
        self.nodes[child].parent = NONE;
        let rec = &mut self.nodes[parent];
        if let Some(slot) = rec.children.iter_mut().find(|c| **c == child as u32) {
            *slot = NONE;
        } else {
            rec.extra_children.retain(|&c| c != child as u32);
        }
        Ok(())
    }

    /// Snapshot of the forest as sorted (vertex, parent) rows.
    pub fn export(&self) -> Vec<(usize, Option<usize>)> {
        let mut rows: Vec<(usize, Option<usize>)> =
            self.vertices().map(|v| (v, self.parent(v))).collect();
        rows.sort_unstable();
        rows
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.live.iter().map(|&v| v as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_then_export() {
        let mut f = DynamicForest::with_capacity(10);
        f.add_vertex(3).unwrap();
        f.add_vertex(7).unwrap();
        f.link(3, 7).unwrap();
        assert_eq!(f.export(), vec![(3, None), (7, Some(3))]);
        f.cut(3, 7).unwrap();
        assert_eq!(f.export(), vec![(3, None), (7, None)]);
    }

    #[test]
    fn rejects_bad_operations() {
        let mut f = DynamicForest::with_capacity(8);
        f.add_vertex(0).unwrap();
        f.add_vertex(1).unwrap();
        f.add_vertex(2).unwrap();
        f.link(0, 1).unwrap();
        assert!(matches!(f.link(1, 0), Err(Error::LinkWithinComponent) | Err(Error::LinkNotRoot(_))));
        assert!(matches!(f.link(0, 1), Err(Error::LinkNotRoot(1))));
        assert!(matches!(f.cut(0, 2), Err(Error::CutAbsentEdge(0, 2))));
        assert!(matches!(f.remove_vertex(0), Err(Error::ForestVertex(_))));
        f.cut(0, 1).unwrap();
        f.remove_vertex(1).unwrap();
        assert!(!f.contains(1));
        assert!(f.add_vertex(8).is_err());
    }

    #[test]
    fn random_script_matches_naive_components() {
        use crate::dynforest::reference::NaiveForest;
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let n = 40;
        let mut f = DynamicForest::with_capacity(n);
        let mut naive = NaiveForest::new();
        for v in 0..n {
            f.add_vertex(v).unwrap();
            naive.add_vertex(v);
        }
        for _ in 0..800 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            if rng.random_bool(0.6) {
                if f.link(u, v).is_ok() {
                    naive.link(u, v);
                }
            } else if f.cut(u, v).is_ok() {
                naive.cut(u, v);
            }
            for probe in 0..n {
                assert_eq!(f.same_component(probe, 0), naive.same_component(probe, 0));
            }
        }
    }
}
