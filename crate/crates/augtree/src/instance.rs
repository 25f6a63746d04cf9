//! Problem instances, shortcut sets, generators, and the DOAT text format.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::{CostOracle, OracleKind};
use crate::error::{Error, ParseError, Result};
use crate::lowerbound::{LbOracle, LbVariant, LowerBoundParams};
use crate::tree::{Tree, COST_BUDGET};

/// A candidate extra edge with its revealed cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shortcut {
    pub u: usize,
    pub v: usize,
    pub cost: u64,
}

impl Shortcut {
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A validated set of shortcuts: distinct endpoints, no duplicate pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ShortcutSet {
    edges: Vec<Shortcut>,
}

impl ShortcutSet {
    pub fn new(edges: Vec<Shortcut>) -> Result<Self> {
        let mut keys: Vec<_> = edges.iter().map(|s| s.key()).collect();
        keys.sort_unstable();
        for s in &edges {
            if s.u == s.v {
                return Err(Error::Solver(format!("shortcut with equal endpoints {}", s.u)));
            }
        }
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Solver("duplicate shortcut pair".into()));
        }
        Ok(ShortcutSet { edges })
    }

    /// Build from endpoint pairs, pricing each edge with one oracle query.
    pub fn from_pairs(instance: &Instance, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Shortcut { u, v, cost: instance.oracle.cost(u, v) })
            .collect();
        Self::new(edges)
    }

    pub fn edges(&self) -> &[Shortcut] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Check the plain-mode invariants against an instance: at most k edges,
    /// none parallel to a tree edge.
    pub fn validate_for(&self, instance: &Instance) -> Result<()> {
        if self.edges.len() > instance.k {
            return Err(Error::Solver(format!(
                "{} shortcuts exceed the budget k = {}",
                self.edges.len(),
                instance.k
            )));
        }
        let tree_pairs: std::collections::HashSet<(usize, usize)> = instance
            .tree
            .edges()
            .iter()
            .map(|&(u, v, _)| (u.min(v), u.max(v)))
            .collect();
        for s in &self.edges {
            if tree_pairs.contains(&s.key()) {
                return Err(Error::Solver(format!(
                    "shortcut ({}, {}) coincides with a tree edge",
                    s.u, s.v
                )));
            }
        }
        Ok(())
    }
}

impl std::ops::Deref for ShortcutSet {
    type Target = [Shortcut];
    fn deref(&self) -> &[Shortcut] {
        &self.edges
    }
}

/// A tree embedded in a cost space, plus the shortcut budget k.
#[derive(Debug, Clone)]
pub struct Instance {
    pub tree: Tree,
    pub oracle: CostOracle,
    pub k: usize,
}

impl Instance {
    pub fn new(tree: Tree, oracle: CostOracle, k: usize) -> Result<Self> {
        if oracle.n() != tree.n() {
            return Err(Error::Solver(format!(
                "oracle covers {} vertices but the tree has {}",
                oracle.n(),
                tree.n()
            )));
        }
        if k == 0 {
            return Err(Error::Solver("shortcut budget k must be at least 1".into()));
        }
        if oracle.is_metric_kind() {
            for &(u, v, w) in tree.edges() {
                let c = oracle.peek(u, v);
                if c != w {
                    return Err(Error::Solver(format!(
                        "tree edge ({u}, {v}) cost {w} disagrees with the metric oracle cost {c}"
                    )));
                }
            }
        }
        Ok(Instance { tree, oracle, k })
    }

    /// Equality ignoring query-counter state.
    pub fn same_content(&self, other: &Instance) -> bool {
        self.tree == other.tree && self.k == other.k && self.oracle.kind() == other.oracle.kind()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    /// Random recursive tree over L1 grid points.
    RandomL1,
    /// Path over L1 grid points.
    PathL1,
}

/// Deterministic random metric instance: n points on the 2^16 integer grid
/// under L1 distance, tree edges priced by the metric.
pub fn gen_random(n: usize, k: usize, seed: u64, family: RandomFamily) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Solver(format!("need at least 2 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(i64, i64)> =
        (0..n).map(|_| (rng.random_range(0..1 << 16), rng.random_range(0..1 << 16))).collect();
    let l1 = |u: usize, v: usize| -> u64 {
        points[u].0.abs_diff(points[v].0) + points[u].1.abs_diff(points[v].1)
    };
    let edges: Vec<(usize, usize, u64)> = match family {
        RandomFamily::RandomL1 => (1..n).map(|v| {
            let p = rng.random_range(0..v);
            (p, v, l1(p, v))
        }).collect(),
        RandomFamily::PathL1 => (1..n).map(|v| (v - 1, v, l1(v - 1, v))).collect(),
    };
    let tree = Tree::new(n, edges)?;
    Instance::new(tree, CostOracle::l1(points), k)
}

fn oracle_tag(kind: &OracleKind) -> &'static str {
    match kind {
        OracleKind::Explicit(_) => "explicit",
        OracleKind::L1Points(_) => "l1",
        OracleKind::LowerBound(lb) => {
            // k is carried by the header; the tag only distinguishes arity.
            let _ = lb;
            "lbk"
        }
    }
}

/// Serialize an instance in the DOAT text format.
pub fn format_instance(instance: &Instance) -> String {
    let n = instance.tree.n();
    let mut out = String::new();
    let tag = match instance.oracle.kind() {
        OracleKind::LowerBound(_) if instance.k == 3 => "lb3",
        other => oracle_tag(other),
    };
    writeln!(out, "DOAT 1").unwrap();
    writeln!(out, "n={} k={} oracle={}", n, instance.k, tag).unwrap();
    for &(u, v, w) in instance.tree.edges() {
        writeln!(out, "T {u} {v} {w}").unwrap();
    }
    match instance.oracle.kind() {
        OracleKind::Explicit(m) => {
            for row in m {
                let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
        }
        OracleKind::L1Points(points) => {
            for &(x, y) in points {
                writeln!(out, "{x} {y}").unwrap();
            }
        }
        OracleKind::LowerBound(lb) => {
            match lb.variant() {
                LbVariant::I => {
                    writeln!(out, "params n_star={} variant=I", lb.layout().n_star()).unwrap()
                }
                LbVariant::Iab { a, b } => writeln!(
                    out,
                    "params n_star={} a={} b={} variant=Iab",
                    lb.layout().n_star(),
                    a,
                    b
                )
                .unwrap(),
            };
        }
    }
    out
}

pub fn save_instance(instance: &Instance, path: &Path) -> Result<()> {
    fs::write(path, format_instance(instance))?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

fn parse_cost(tok: &str) -> Result<u64> {
    let c: u64 = tok.parse().map_err(|_| ParseError::Cost(tok.into()))?;
    if c >= COST_BUDGET {
        return Err(ParseError::Overflow.into());
    }
    Ok(c)
}

fn kv<'a>(tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| ParseError::Header(format!("expected {key}=<value>, got {tok:?}")).into())
}

/// Parse the DOAT text format.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let magic = lines.next().ok_or_else(|| ParseError::Header("empty file".into()))?;
    if magic.trim() != "DOAT 1" {
        return Err(ParseError::Header(format!("bad magic line {magic:?}")).into());
    }
    let header = lines.next().ok_or_else(|| ParseError::Header("missing header line".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(ParseError::Header(format!("expected 3 header fields, got {}", toks.len())).into());
    }
    let n: usize = kv(toks[0], "n")?
        .parse()
        .map_err(|_| ParseError::Header(format!("bad n in {header:?}")))?;
    let k: usize = kv(toks[1], "k")?
        .parse()
        .map_err(|_| ParseError::Header(format!("bad k in {header:?}")))?;
    let oracle_tag = kv(toks[2], "oracle")?;
    if n == 0 {
        return Err(ParseError::Header("n must be positive".into()).into());
    }

    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 0..n - 1 {
        let Some(line) = lines.next() else {
            return Err(ParseError::EdgeCount { expected: n - 1, found: edges.len() }.into());
        };
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 4 || t[0] != "T" {
            // A short edge block runs into the oracle section.
            return Err(ParseError::EdgeCount { expected: n - 1, found: edges.len() }.into());
        }
        let u: usize = t[1].parse().map_err(|_| ParseError::Cost(t[1].into()))?;
        let v: usize = t[2].parse().map_err(|_| ParseError::Cost(t[2].into()))?;
        edges.push((u, v, parse_cost(t[3])?));
    }
    let rest: Vec<&str> = lines.collect();
    if rest.first().is_some_and(|l| l.split_whitespace().next() == Some("T")) {
        return Err(ParseError::EdgeCount { expected: n - 1, found: n }.into());
    }

    let oracle = match oracle_tag {
        "explicit" => {
            if rest.len() != n {
                return Err(ParseError::OracleBlock(format!(
                    "expected {n} matrix rows, found {}",
                    rest.len()
                ))
                .into());
            }
            let mut m = Vec::with_capacity(n);
            for line in &rest {
                let row: Result<Vec<u64>> = line.split_whitespace().map(parse_cost).collect();
                let row = row?;
                if row.len() != n {
                    return Err(
                        ParseError::OracleBlock(format!("matrix row of width {}", row.len())).into()
                    );
                }
                m.push(row);
            }
            for i in 0..n {
                if m[i][i] != 0 {
                    return Err(ParseError::OracleBlock(format!("nonzero diagonal at {i}")).into());
                }
                for j in 0..n {
                    if m[i][j] != m[j][i] {
                        return Err(
                            ParseError::OracleBlock(format!("matrix not symmetric at ({i}, {j})")).into()
                        );
                    }
                }
            }
            CostOracle::explicit(m)
        }
        "l1" => {
            if rest.len() != n {
                return Err(ParseError::OracleBlock(format!(
                    "expected {n} point rows, found {}",
                    rest.len()
                ))
                .into());
            }
            let mut points = Vec::with_capacity(n);
            for line in &rest {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 2 {
                    return Err(ParseError::OracleBlock(format!("bad point line {line:?}")).into());
                }
                let x: i64 = t[0].parse().map_err(|_| ParseError::Cost(t[0].into()))?;
                let y: i64 = t[1].parse().map_err(|_| ParseError::Cost(t[1].into()))?;
                points.push((x, y));
            }
            CostOracle::l1(points)
        }
        "lb3" | "lbk" => {
            if rest.len() != 1 {
                return Err(ParseError::OracleBlock("expected a single params line".into()).into());
            }
            let t: Vec<&str> = rest[0].split_whitespace().collect();
            if t.first() != Some(&"params") {
                return Err(ParseError::Params(format!("bad params line {:?}", rest[0])).into());
            }
            let mut n_star = None;
            let mut a = None;
            let mut b = None;
            let mut variant = None;
            for tok in &t[1..] {
                if let Ok(v) = kv(tok, "n_star") {
                    n_star = Some(v.parse::<usize>().map_err(|_| ParseError::Params(tok.to_string()))?);
                } else if let Ok(v) = kv(tok, "a") {
                    a = Some(v.parse::<usize>().map_err(|_| ParseError::Params(tok.to_string()))?);
                } else if let Ok(v) = kv(tok, "b") {
                    b = Some(v.parse::<usize>().map_err(|_| ParseError::Params(tok.to_string()))?);
                } else if let Ok(v) = kv(tok, "variant") {
                    variant = Some(v.to_string());
                } else {
                    return Err(ParseError::Params(format!("unknown token {tok:?}")).into());
                }
            }
            let n_star = n_star.ok_or_else(|| ParseError::Params("missing n_star".into()))?;
            let variant = match variant.as_deref() {
                Some("I") | None if a.is_none() => LbVariant::I,
                Some("Iab") | None => {
                    let a = a.ok_or_else(|| ParseError::Params("variant Iab needs a=<id>".into()))?;
                    let b = b.ok_or_else(|| ParseError::Params("variant Iab needs b=<id>".into()))?;
                    LbVariant::Iab { a, b }
                }
                Some(other) => {
                    return Err(ParseError::Params(format!("unknown variant {other:?}")).into())
                }
            };
            let params = LowerBoundParams::new(n_star, k, variant)
                .map_err(|e| ParseError::Params(e.to_string()))?;
            if params.layout().n() != n {
                return Err(ParseError::Params(format!(
                    "n={} does not match 4*n_star+6={}",
                    n,
                    params.layout().n()
                ))
                .into());
            }
            CostOracle::lower_bound(LbOracle::new(n_star, variant))
        }
        other => return Err(ParseError::Header(format!("unknown oracle kind {other:?}")).into()),
    };

    let tree = Tree::new(n, edges)?;
    Instance::new(tree, oracle, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::gen_lb;

    #[test]
    fn round_trip_random() {
        let inst = gen_random(10, 2, 7, RandomFamily::RandomL1).unwrap();
        let text = format_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert!(inst.same_content(&back));
    }

    #[test]
    fn round_trip_lower_bound() {
        let params = LowerBoundParams::new(6, 5, LbVariant::I).unwrap();
        let inst = gen_lb(&params).unwrap();
        let back = parse_instance(&format_instance(&inst)).unwrap();
        assert!(inst.same_content(&back));
        assert_eq!(back.tree.n(), 4 * 6 + 6);
    }

    #[test]
    fn round_trip_explicit() {
        let m = vec![vec![0, 5, 9], vec![5, 0, 4], vec![9, 4, 0]];
        let tree = Tree::new(3, vec![(0, 1, 5), (1, 2, 4)]).unwrap();
        let inst = Instance::new(tree, CostOracle::explicit(m), 1).unwrap();
        let back = parse_instance(&format_instance(&inst)).unwrap();
        assert!(inst.same_content(&back));
    }

    #[test]
    fn short_edge_block_is_edge_count_error() {
        let text = "DOAT 1\nn=5 k=1 oracle=l1\nT 0 1 1\nT 1 2 1\nT 2 3 1\n0 0\n0 1\n0 2\n0 3\n0 4\n";
        match parse_instance(text) {
            Err(Error::Parse(ParseError::EdgeCount { expected: 4, .. })) => {}
            other => panic!("expected edge count error, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_cost_is_cost_error() {
        let text = "DOAT 1\nn=2 k=1 oracle=l1\nT 0 1 1.5\n0 0\n1 1\n";
        match parse_instance(text) {
            Err(Error::Parse(ParseError::Cost(_))) => {}
            other => panic!("expected cost error, got {other:?}"),
        }
    }

    #[test]
    fn overflowing_cost_is_rejected() {
        let text = format!("DOAT 1\nn=2 k=1 oracle=explicit\nT 0 1 {c}\n0 {c}\n{c} 0\n", c = 1u64 << 62);
        match parse_instance(&text) {
            Err(Error::Parse(ParseError::Overflow)) => {}
            other => panic!("expected overflow error, got {other:?}"),
        }
    }

    #[test]
    fn determinism_in_seed() {
        let a = gen_random(64, 3, 42, RandomFamily::RandomL1).unwrap();
        let b = gen_random(64, 3, 42, RandomFamily::RandomL1).unwrap();
        assert!(a.same_content(&b));
        let c = gen_random(64, 3, 43, RandomFamily::RandomL1).unwrap();
        assert!(!a.same_content(&c));
    }

    #[test]
    fn two_point_instance() {
        let inst = gen_random(2, 1, 0, RandomFamily::PathL1).unwrap();
        let &(u, v, w) = &inst.tree.edges()[0];
        assert_eq!(w, inst.oracle.peek(u, v));
    }
}
