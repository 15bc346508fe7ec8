//! Arc-weighted digraphs and the connectivity primitives the solvers build on.
//!
//! Vertices are dense `0..n`. Arcs are identified by their position in the
//! input list ([`ArcId`]); every tie-break in the crate resolves to the lowest
//! arc id, so solver output depends only on the instance as given.

mod scc;
mod undirected;
mod verify;

use thiserror::Error;

pub use scc::SccIndex;
pub use undirected::{feedback_edge_number, UndirectedView};
pub use verify::{verify_solution, Verdict, Violation};

pub type Weight = u64;
pub type ArcId = usize;

/// Largest weight an instance may carry (2^63 - 1), shared with the file format.
pub const MAX_WEIGHT: Weight = i64::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {tail}->{head} references a vertex outside 0..{n}")]
    VertexOutOfRange { tail: usize, head: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc {tail}->{head}")]
    DuplicateArc { tail: usize, head: usize },
    #[error("weight {0} exceeds 2^63-1")]
    WeightTooLarge(Weight),
    #[error("arc id {0} does not exist")]
    UnknownArc(ArcId),
    #[error("arc {tail}->{head} does not exist")]
    MissingArc { tail: usize, head: usize },
    #[error("vertex {0} has no outgoing arc in the arc set")]
    MissingOutArc(usize),
    #[error("cost overflows 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: Weight,
}

impl Arc {
    pub fn new(tail: usize, head: usize, weight: Weight) -> Self {
        Arc { tail, head, weight }
    }
}

/// An arc-weighted digraph with compressed out- and in-adjacency.
///
/// Immutable once built. Arcs keep their input order; adjacency lists are
/// ordered by arc id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    arcs: Vec<Arc>,
    out_start: Vec<usize>,
    out_list: Vec<ArcId>,
    in_start: Vec<usize>,
    in_list: Vec<ArcId>,
}

impl Instance {
    pub fn new(n: usize, arcs: Vec<Arc>) -> Result<Self, GraphError> {
        for a in &arcs {
            if a.tail >= n || a.head >= n {
                return Err(GraphError::VertexOutOfRange { tail: a.tail, head: a.head, n });
            }
            if a.tail == a.head {
                return Err(GraphError::SelfLoop(a.tail));
            }
            if a.weight > MAX_WEIGHT {
                return Err(GraphError::WeightTooLarge(a.weight));
            }
        }
        let (out_start, out_list) = csr(n, &arcs, |a| a.tail);
        let (in_start, in_list) = csr(n, &arcs, |a| a.head);

        // marker[head] == tail + 1 while scanning tail's out-list
        let mut marker = vec![0usize; n];
        for v in 0..n {
            for &id in &out_list[out_start[v]..out_start[v + 1]] {
                let h = arcs[id].head;
                if marker[h] == v + 1 {
                    return Err(GraphError::DuplicateArc { tail: v, head: h });
                }
                marker[h] = v + 1;
            }
        }
        Ok(Instance { n, arcs, out_start, out_list, in_start, in_list })
    }

    /// Convenience constructor from `(tail, head, weight)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, Weight)]) -> Result<Self, GraphError> {
        Self::new(n, triples.iter().map(|&(t, h, w)| Arc::new(t, h, w)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id]
    }

    pub fn out_arcs(&self, v: usize) -> &[ArcId] {
        &self.out_list[self.out_start[v]..self.out_start[v + 1]]
    }

    pub fn in_arcs(&self, v: usize) -> &[ArcId] {
        &self.in_list[self.in_start[v]..self.in_start[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_start[v + 1] - self.out_start[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_start[v + 1] - self.in_start[v]
    }

    pub fn find_arc(&self, tail: usize, head: usize) -> Option<ArcId> {
        if tail >= self.n {
            return None;
        }
        self.out_arcs(tail).iter().copied().find(|&id| self.arcs[id].head == head)
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<Weight> {
        self.find_arc(tail, head).map(|id| self.arcs[id].weight)
    }

    pub fn min_out_weight(&self, v: usize) -> Option<Weight> {
        self.out_arcs(v).iter().map(|&id| self.arcs[id].weight).min()
    }

    /// Sub-instance on the same vertex set keeping only `ids` (in the given order).
    pub fn restrict(&self, ids: &[ArcId]) -> Instance {
        let arcs = ids.iter().map(|&id| self.arcs[id]).collect();
        Instance::new(self.n, arcs).expect("subset of a valid arc list is valid")
    }

    /// Membership mask over arc ids.
    pub fn arc_mask(&self, ids: &[ArcId]) -> Vec<bool> {
        let mut mask = vec![false; self.m()];
        for &id in ids {
            mask[id] = true;
        }
        mask
    }

    pub fn is_strongly_connected(&self) -> bool {
        let all = vec![true; self.m()];
        self.is_strongly_connected_masked(&all)
    }

    pub fn is_strongly_connected_arcs(&self, ids: &[ArcId]) -> bool {
        self.is_strongly_connected_masked(&self.arc_mask(ids))
    }

    /// Strong connectivity of `(V, {a : mask[a]})` via one forward and one backward sweep from 0.
    pub fn is_strongly_connected_masked(&self, mask: &[bool]) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.sweep(mask, true) && self.sweep(mask, false)
    }

    fn sweep(&self, mask: &[bool], forward: bool) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            let list = if forward { self.out_arcs(v) } else { self.in_arcs(v) };
            for &id in list {
                if !mask[id] {
                    continue;
                }
                let a = self.arcs[id];
                let u = if forward { a.head } else { a.tail };
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }
}

fn csr(n: usize, arcs: &[Arc], key: impl Fn(&Arc) -> usize) -> (Vec<usize>, Vec<ArcId>) {
    let mut start = vec![0usize; n + 1];
    for a in arcs {
        start[key(a) + 1] += 1;
    }
    for v in 0..n {
        start[v + 1] += start[v];
    }
    let mut fill = start.clone();
    let mut list = vec![0; arcs.len()];
    for (id, a) in arcs.iter().enumerate() {
        let k = key(a);
        list[fill[k]] = id;
        fill[k] += 1;
    }
    (start, list)
}

/// `Σ_{v ∈ vertices} max_{vu ∈ arcs} w(vu)`.
///
/// A vertex without an outgoing arc in `arcs` is an error unless the
/// instance has a single vertex, where the empty maximum counts as 0.
pub fn cost(instance: &Instance, vertices: &[usize], arcs: &[ArcId]) -> Result<Weight, GraphError> {
    let mut best: Vec<Option<Weight>> = vec![None; instance.n()];
    for &id in arcs {
        if id >= instance.m() {
            return Err(GraphError::UnknownArc(id));
        }
        let a = instance.arc(id);
        let slot = &mut best[a.tail];
        *slot = Some(slot.map_or(a.weight, |w| w.max(a.weight)));
    }
    let mut total: Weight = 0;
    for &v in vertices {
        let pay = match best.get(v).copied().flatten() {
            Some(w) => w,
            None if instance.n() == 1 => 0,
            None => return Err(GraphError::MissingOutArc(v)),
        };
        total = total.checked_add(pay).ok_or(GraphError::Overflow)?;
    }
    Ok(total)
}

/// [`cost`] over all vertices.
pub fn total_cost(instance: &Instance, arcs: &[ArcId]) -> Result<Weight, GraphError> {
    let all: Vec<usize> = (0..instance.n()).collect();
    cost(instance, &all, arcs)
}

/// A spanning arc set given by endpoints, with its claimed total cost.
///
/// Arcs are stored sorted by `(tail, head)` when produced by a solver; a
/// parsed solution file keeps whatever order it had.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    pub arcs: Vec<(usize, usize)>,
    pub cost: Weight,
}

impl Solution {
    /// Builds a solution from arc ids and computes its exact cost.
    pub fn from_arc_ids(instance: &Instance, ids: &[ArcId]) -> Result<Self, GraphError> {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let cost = total_cost(instance, &ids)?;
        let mut arcs: Vec<(usize, usize)> = ids
            .iter()
            .map(|&id| {
                let a = instance.arc(id);
                (a.tail, a.head)
            })
            .collect();
        arcs.sort_unstable();
        Ok(Solution { arcs, cost })
    }

    /// Resolves the endpoint pairs to arc ids of `instance`.
    pub fn arc_ids(&self, instance: &Instance) -> Result<Vec<ArcId>, GraphError> {
        self.arcs
            .iter()
            .map(|&(t, h)| instance.find_arc(t, h).ok_or(GraphError::MissingArc { tail: t, head: h }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Instance {
        Instance::from_triples(2, &[(0, 1, 2), (1, 0, 3)]).unwrap()
    }

    #[test]
    fn rejects_malformed_arc_lists() {
        assert_eq!(
            Instance::from_triples(2, &[(0, 1, 1), (0, 1, 2)]),
            Err(GraphError::DuplicateArc { tail: 0, head: 1 })
        );
        assert_eq!(Instance::from_triples(2, &[(1, 1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(Instance::from_triples(2, &[(0, 2, 1)]), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(Instance::from_triples(2, &[(0, 1, u64::MAX)]), Err(GraphError::WeightTooLarge(u64::MAX)));
    }

    #[test]
    fn cost_takes_the_heaviest_out_arc() {
        let g = Instance::from_triples(3, &[(0, 1, 3), (0, 2, 1), (1, 0, 0), (2, 0, 0)]).unwrap();
        assert_eq!(cost(&g, &[0], &[0, 1]), Ok(3));
        assert_eq!(total_cost(&t2(), &[0, 1]), Ok(5));
        let single = Instance::new(1, vec![]).unwrap();
        assert_eq!(total_cost(&single, &[]), Ok(0));
        assert_eq!(total_cost(&t2(), &[0]), Err(GraphError::MissingOutArc(1)));
    }

    #[test]
    fn cost_overflow_is_reported() {
        let g = Instance::from_triples(2, &[(0, 1, MAX_WEIGHT), (1, 0, MAX_WEIGHT)]).unwrap();
        assert_eq!(total_cost(&g, &[0, 1]), Ok(2 * MAX_WEIGHT));
        let g = Instance::from_triples(3, &[(0, 1, MAX_WEIGHT), (1, 2, MAX_WEIGHT), (2, 0, MAX_WEIGHT)]).unwrap();
        assert_eq!(total_cost(&g, &[0, 1, 2]), Err(GraphError::Overflow));
    }

    #[test]
    fn strong_connectivity() {
        let cycle = Instance::from_triples(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(cycle.is_strongly_connected());
        assert!(!cycle.is_strongly_connected_arcs(&[0, 1]));
        assert!(Instance::new(1, vec![]).unwrap().is_strongly_connected());
        assert!(!Instance::new(2, vec![]).unwrap().is_strongly_connected());
    }

    #[test]
    fn solution_from_ids_is_canonical() {
        let s = Solution::from_arc_ids(&t2(), &[1, 0, 1]).unwrap();
        assert_eq!(s.arcs, vec![(0, 1), (1, 0)]);
        assert_eq!(s.cost, 5);
        assert_eq!(s.arc_ids(&t2()), Ok(vec![0, 1]));
    }
}
