//! Dual-tree Boruvka Euclidean MST.
//!
//! Each round finds, for every connected component, its shortest edge to a
//! foreign component, then merges along all of those edges; components at
//! least halve per round. The per-round search is one simultaneous
//! traversal of (kd-node, kd-node) pairs pruned by
//!
//! * component identity: a node pair fully inside one component has no
//!   candidate edges, and
//! * distance: a pair is skipped when the box gap exceeds every candidate
//!   bound of the components present on the query side.
//!
//! Candidate edges are ordered by `(d^2, min index, max index)` so distance
//! ties resolve to a single total order and the edge set stays
//! deterministic.

use super::kdtree::SpatialIndex;
use super::{Edge, SpanKind, SpanningStructure};
use crate::error::{Error, Result};
use crate::points::{PointSet, dist2, pairwise_sum};

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    #[inline]
    pub fn find(&mut self, mut x: u32) -> u32 {
        // Path halving.
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        true
    }
}

const NO_COMP: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    d2: f64,
    u: u32,
    v: u32,
}

impl Candidate {
    const NONE: Candidate = Candidate { d2: f64::INFINITY, u: u32::MAX, v: u32::MAX };

    #[inline]
    fn new(a: u32, b: u32, d2: f64) -> Self {
        if a < b { Self { d2, u: a, v: b } } else { Self { d2, u: b, v: a } }
    }

    #[inline]
    fn beats(&self, other: &Candidate) -> bool {
        self.d2 < other.d2 || (self.d2 == other.d2 && (self.u, self.v) < (other.u, other.v))
    }
}

struct BoruvkaState<'a, 'p> {
    index: &'a SpatialIndex<'p>,
    uf: UnionFind,
    /// Component id of each node's subtree, `NO_COMP` if mixed.
    node_comp: Vec<u32>,
    /// Upper bound on `max{best[c].d^2 : component c has points in node}`.
    node_bound: Vec<f64>,
    /// Best outgoing candidate per component root.
    best: Vec<Candidate>,
}

impl<'p> BoruvkaState<'_, 'p> {
    fn refresh_node_comps(&mut self) {
        let nodes = self.index.nodes();
        // Children were pushed after parents, so reverse order sees them first.
        for id in (0..nodes.len()).rev() {
            let node = nodes[id];
            self.node_comp[id] = if node.is_leaf() {
                let pts = &self.index.perm()[node.start as usize..node.end as usize];
                let first = self.uf.find(pts[0]);
                if pts[1..].iter().all(|&p| self.uf.find(p) == first) {
                    first
                } else {
                    NO_COMP
                }
            } else {
                let (l, r) = (self.node_comp[node.left as usize], self.node_comp[node.right as usize]);
                if l != NO_COMP && l == r { l } else { NO_COMP }
            };
        }
    }

    fn dual(&mut self, a: u32, b: u32) {
        let ca = self.node_comp[a as usize];
        if ca != NO_COMP && ca == self.node_comp[b as usize] {
            return;
        }
        // Strictly-greater prune keeps tie exploration, which the total
        // order on candidates requires.
        if self.index.mindist2_nodes(a, b) > self.node_bound[a as usize] {
            return;
        }
        let na = self.index.nodes()[a as usize];
        let nb = self.index.nodes()[b as usize];
        match (na.is_leaf(), nb.is_leaf()) {
            (true, true) => {
                self.leaf_pair(a, b);
            }
            (a_leaf, b_leaf) => {
                // Descend the side with more points; near child first on
                // the reference side so bounds tighten early.
                if a_leaf || (!b_leaf && nb.count() >= na.count()) {
                    let (l, r) = (nb.left, nb.right);
                    let (dl, dr) =
                        (self.index.mindist2_nodes(a, l), self.index.mindist2_nodes(a, r));
                    let (near, far) = if dl <= dr { (l, r) } else { (r, l) };
                    self.dual(a, near);
                    self.dual(a, far);
                } else {
                    self.dual(na.left, b);
                    self.dual(na.right, b);
                    self.node_bound[a as usize] = self.node_bound[na.left as usize]
                        .max(self.node_bound[na.right as usize]);
                }
            }
        }
    }

    fn leaf_pair(&mut self, a: u32, b: u32) {
        let na = self.index.nodes()[a as usize];
        let nb = self.index.nodes()[b as usize];
        let cb = self.node_comp[b as usize];
        let points = self.index.points();
        let (qs, rs) = (
            &self.index.perm()[na.start as usize..na.end as usize],
            &self.index.perm()[nb.start as usize..nb.end as usize],
        );
        for &p in qs {
            let cp = self.uf.find(p);
            if cp == cb {
                continue;
            }
            if self.index.mindist2_point(points.point(p as usize), b)
                > self.best[cp as usize].d2
            {
                continue;
            }
            let pc = points.point(p as usize);
            for &q in rs {
                let cq = self.uf.find(q);
                if cq == cp {
                    continue;
                }
                let cand = Candidate::new(p, q, dist2(pc, points.point(q as usize)));
                if cand.beats(&self.best[cp as usize]) {
                    self.best[cp as usize] = cand;
                }
                if cand.beats(&self.best[cq as usize]) {
                    self.best[cq as usize] = cand;
                }
            }
        }
        let mut bound = 0.0f64;
        for &p in qs {
            let cp = self.uf.find(p);
            bound = bound.max(self.best[cp as usize].d2);
        }
        self.node_bound[a as usize] = bound;
    }
}

/// Euclidean MST via dual-tree Boruvka. Total length agrees with
/// [`super::emst_exact`] up to accumulation error; edge sets can differ
/// only across exact distance ties.
pub fn emst_fast(points: &PointSet) -> Result<SpanningStructure> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidArgument("emst requires at least one point".into()));
    }
    // Tree overhead dwarfs the quadratic scan on tiny inputs.
    if n <= 32 {
        return super::emst_exact(points);
    }
    points.check_finite()?;

    let index = SpatialIndex::build(points, 16)?;
    let node_count = index.nodes().len();
    let mut state = BoruvkaState {
        index: &index,
        uf: UnionFind::new(n),
        node_comp: vec![NO_COMP; node_count],
        node_bound: vec![f64::INFINITY; node_count],
        best: vec![Candidate::NONE; n],
    };

    let mut edges: Vec<Edge> = Vec::with_capacity(n - 1);
    let mut components = n;
    while components > 1 {
        state.refresh_node_comps();
        state.node_bound.fill(f64::INFINITY);
        for i in 0..n as u32 {
            if state.uf.find(i) == i {
                state.best[i as usize] = Candidate::NONE;
            }
        }

        state.dual(0, 0);

        let mut round: Vec<Candidate> = (0..n as u32)
            .filter(|&i| state.uf.find(i) == i && state.best[i as usize].d2.is_finite())
            .map(|i| state.best[i as usize])
            .collect();
        round.sort_unstable_by(|a, b| {
            a.d2.partial_cmp(&b.d2).expect("finite").then_with(|| (a.u, a.v).cmp(&(b.u, b.v)))
        });

        let before = components;
        for cand in round {
            if state.uf.union(cand.u, cand.v) {
                edges.push(Edge {
                    u: cand.u as usize,
                    v: cand.v as usize,
                    length: cand.d2.sqrt(),
                });
                components -= 1;
            }
        }
        assert!(components < before, "Boruvka round made no progress");
    }

    edges.sort_unstable_by_key(|e| (e.u, e.v));
    let lengths: Vec<f64> = edges.iter().map(|e| e.length).collect();
    Ok(SpanningStructure {
        kind: SpanKind::Emst,
        total_length: pairwise_sum(&lengths),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_merges_and_finds() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert!(uf.union(3, 4));
        assert_eq!(uf.find(1), uf.find(0));
        assert_ne!(uf.find(0), uf.find(3));
    }

    #[test]
    fn candidate_order_is_total() {
        let a = Candidate::new(3, 1, 2.0);
        assert_eq!((a.u, a.v), (1, 3));
        let b = Candidate::new(0, 2, 2.0);
        assert!(b.beats(&a));
        assert!(!a.beats(&b));
        let c = Candidate::new(9, 8, 1.0);
        assert!(c.beats(&a));
    }
}
