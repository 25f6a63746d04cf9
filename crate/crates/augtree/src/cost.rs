//! Pair-cost oracles with query accounting.

use std::cell::{Cell, RefCell};
use std::collections::HashSet;

use crate::lowerbound::LbOracle;

/// A symmetric non-negative cost function on vertex pairs, with a counter of
/// look-ups performed. Every call to [`CostOracle::cost`] increments the
/// counter by exactly one, including repeated look-ups of the same pair;
/// callers that want fewer queries must memoize on their side.
#[derive(Debug, Clone)]
pub struct CostOracle {
    kind: OracleKind,
    queries: Cell<u64>,
    log: RefCell<Option<HashSet<(usize, usize)>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleKind {
    /// Explicit symmetric matrix with zero diagonal.
    Explicit(Vec<Vec<u64>>),
    /// Integer grid points under the L1 distance; exactly metric.
    L1Points(Vec<(i64, i64)>),
    /// Adversarial lower-bound family; costs are graph distances, so metric.
    LowerBound(LbOracle),
}

impl CostOracle {
    pub fn explicit(matrix: Vec<Vec<u64>>) -> Self {
        Self::from_kind(OracleKind::Explicit(matrix))
    }

    pub fn l1(points: Vec<(i64, i64)>) -> Self {
        Self::from_kind(OracleKind::L1Points(points))
    }

    pub fn lower_bound(lb: LbOracle) -> Self {
        Self::from_kind(OracleKind::LowerBound(lb))
    }

    pub fn from_kind(kind: OracleKind) -> Self {
        CostOracle { kind, queries: Cell::new(0), log: RefCell::new(None) }
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    /// Number of vertices the oracle is defined on.
    pub fn n(&self) -> usize {
        match &self.kind {
            OracleKind::Explicit(m) => m.len(),
            OracleKind::L1Points(p) => p.len(),
            OracleKind::LowerBound(lb) => lb.n(),
        }
    }

    /// Whether this oracle kind satisfies the triangle inequality by
    /// construction.
    pub fn is_metric_kind(&self) -> bool {
        !matches!(self.kind, OracleKind::Explicit(_))
    }

    /// Cost of the pair `(u, v)`, counting one query.
    pub fn cost(&self, u: usize, v: usize) -> u64 {
        self.queries.set(self.queries.get() + 1);
        if let Some(log) = self.log.borrow_mut().as_mut() {
            log.insert((u.min(v), u.max(v)));
        }
        self.peek(u, v)
    }

    /// Cost of the pair without touching the query counter. Intended for
    /// validation and tests, not for solver code paths.
    pub fn peek(&self, u: usize, v: usize) -> u64 {
        assert!(u != v, "oracle cost is only defined for distinct vertices");
        match &self.kind {
            OracleKind::Explicit(m) => m[u][v],
            OracleKind::L1Points(p) => {
                let (ux, uy) = p[u];
                let (vx, vy) = p[v];
                ux.abs_diff(vx) + uy.abs_diff(vy)
            }
            OracleKind::LowerBound(lb) => lb.dist(u, v),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn reset_queries(&self) {
        self.queries.set(0);
    }

    /// Start recording the set of distinct pairs looked up.
    pub fn enable_log(&self) {
        *self.log.borrow_mut() = Some(HashSet::new());
    }

    pub fn take_log(&self) -> Option<HashSet<(usize, usize)>> {
        self.log.borrow_mut().take()
    }
}

/// How thoroughly [`verify_metric`] should search for violations.
#[derive(Debug, Clone, Copy)]
pub enum MetricCheck {
    /// All ordered triples; Theta(n^3) oracle look-ups.
    Full,
    /// `samples` random triples drawn deterministically from `seed`.
    Sampled { samples: usize, seed: u64 },
}

/// Outcome of a triangle-inequality check. `violation` is the first triple
/// `(u, w, v)` found with `cost(u, v) > cost(u, w) + cost(w, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricReport {
    pub ok: bool,
    pub violation: Option<(usize, usize, usize)>,
}

pub fn verify_metric(oracle: &CostOracle, n: usize, mode: MetricCheck) -> MetricReport {
    assert!(n >= 3, "metric verification needs at least three vertices");
    let check = |u: usize, w: usize, v: usize| -> bool {
        oracle.cost(u, v) <= oracle.cost(u, w) + oracle.cost(w, v)
    };
    match mode {
        MetricCheck::Full => {
            for u in 0..n {
                for v in u + 1..n {
                    for w in 0..n {
                        if w == u || w == v {
                            continue;
                        }
                        if !check(u, w, v) {
                            return MetricReport { ok: false, violation: Some((u, w, v)) };
                        }
                    }
                }
            }
            MetricReport { ok: true, violation: None }
        }
        MetricCheck::Sampled { samples, seed } => {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                let w = rng.random_range(0..n);
                if u == v || v == w || u == w {
                    continue;
                }
                if !check(u, w, v) {
                    return MetricReport { ok: false, violation: Some((u, w, v)) };
                }
            }
            MetricReport { ok: true, violation: None }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_every_lookup() {
        let o = CostOracle::l1(vec![(0, 0), (3, 4), (10, 0)]);
        assert_eq!(o.queries(), 0);
        assert_eq!(o.cost(0, 1), 7);
        assert_eq!(o.cost(1, 0), 7);
        assert_eq!(o.cost(0, 1), 7);
        assert_eq!(o.queries(), 3);
        assert_eq!(o.peek(0, 2), 10);
        assert_eq!(o.queries(), 3);
    }

    #[test]
    fn detects_constructed_violation() {
        let m = vec![vec![0, 1, 10], vec![1, 0, 1], vec![10, 1, 0]];
        let o = CostOracle::explicit(m);
        let r = verify_metric(&o, 3, MetricCheck::Full);
        assert!(!r.ok);
        assert_eq!(r.violation, Some((0, 1, 2)));
    }

    #[test]
    fn l1_grid_points_are_metric() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<(i64, i64)> = (0..64).map(|_| (rng.random_range(0..1 << 16), rng.random_range(0..1 << 16))).collect();
        let o = CostOracle::l1(pts);
        assert!(verify_metric(&o, 64, MetricCheck::Full).ok);
    }
}
