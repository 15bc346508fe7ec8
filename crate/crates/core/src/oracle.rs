//! Brute-force reference solvers.
//!
//! Any feasible arc set can be closed upward to `{ vu : w(vu) <= t(v) }` where
//! `t(v)` is the heaviest chosen arc leaving `v`, without changing the cost. So
//! it suffices to enumerate one threshold per vertex among its distinct
//! out-weights.

use thiserror::Error;

use crate::exec::{self, Exec};
use crate::graph::{ArcId, Instance, Solution, Weight};

pub const DEFAULT_CAP: u64 = 10_000_000;
pub const MAX_SUBSET_ARCS: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{count} threshold combinations exceed the cap of {cap}")]
    CapExceeded { count: u64, cap: u64 },
    #[error("{m} arcs are too many for subset enumeration (at most {max})")]
    TooManyArcs { m: usize, max: usize },
    #[error("no strongly connected spanning subgraph exists")]
    Infeasible,
    #[error("cost overflows 64 bits")]
    Overflow,
}

fn distinct_weights(instance: &Instance, v: usize) -> Vec<Weight> {
    let mut w: Vec<Weight> = instance.out_arcs(v).iter().map(|&id| instance.arc(id).weight).collect();
    w.sort_unstable();
    w.dedup();
    w
}

/// `Π_v` (number of distinct out-weights of `v`), saturating at `2^63 - 1`.
pub fn oracle_count_combinations(instance: &Instance) -> u64 {
    const LIMIT: u64 = i64::MAX as u64;
    let mut count: u64 = 1;
    for v in 0..instance.n() {
        let k = distinct_weights(instance, v).len() as u64;
        count = count.saturating_mul(k).min(LIMIT);
    }
    count
}

/// Connectivity test specialised to the threshold enumeration.
enum Checker {
    /// `masks[v][i]`: heads reached by `v` at its `i`-th threshold (n <= 64)
    Small(Vec<Vec<u64>>),
    /// `prefix[v][i]`: arcs of `v` with weight <= its `i`-th threshold
    General(Vec<Vec<Vec<ArcId>>>),
}

impl Checker {
    fn new(instance: &Instance, weights: &[Vec<Weight>]) -> Self {
        let n = instance.n();
        if n <= 64 {
            let masks = (0..n)
                .map(|v| {
                    weights[v]
                        .iter()
                        .map(|&t| {
                            instance
                                .out_arcs(v)
                                .iter()
                                .map(|&id| instance.arc(id))
                                .filter(|a| a.weight <= t)
                                .fold(0u64, |m, a| m | 1 << a.head)
                        })
                        .collect()
                })
                .collect();
            Checker::Small(masks)
        } else {
            let prefix = (0..n)
                .map(|v| {
                    weights[v]
                        .iter()
                        .map(|&t| {
                            instance.out_arcs(v).iter().copied().filter(|&id| instance.arc(id).weight <= t).collect()
                        })
                        .collect()
                })
                .collect();
            Checker::General(prefix)
        }
    }

    fn connected(&self, instance: &Instance, digits: &[usize]) -> bool {
        match self {
            Checker::Small(masks) => {
                let out: Vec<u64> = digits.iter().enumerate().map(|(v, &i)| masks[v][i]).collect();
                strongly_connected_masks(&out)
            }
            Checker::General(prefix) => {
                let ids: Vec<ArcId> =
                    digits.iter().enumerate().flat_map(|(v, &i)| prefix[v][i].iter().copied()).collect();
                instance.is_strongly_connected_arcs(&ids)
            }
        }
    }
}

fn strongly_connected_masks(out: &[u64]) -> bool {
    let n = out.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let reach = |adj: &dyn Fn(usize) -> u64| {
        let mut seen = 1u64;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            let mut fresh = adj(v) & !seen;
            seen |= fresh;
            while fresh != 0 {
                stack.push(fresh.trailing_zeros() as usize);
                fresh &= fresh - 1;
            }
        }
        seen == full
    };
    if !reach(&|v| out[v]) {
        return false;
    }
    let mut inn = vec![0u64; n];
    for (v, &m) in out.iter().enumerate() {
        for (u, slot) in inn.iter_mut().enumerate() {
            if m >> u & 1 == 1 {
                *slot |= 1 << v;
            }
        }
    }
    reach(&|v| inn[v])
}

/// Exact optimum by threshold enumeration, with vertex 0 as the most
/// significant digit and thresholds in ascending order. Ties keep the first
/// combination. Work is split over the thresholds of vertex 0.
pub fn oracle_solve(instance: &Instance, cap: u64, exec: Exec) -> Result<Solution, OracleError> {
    let n = instance.n();
    if n <= 1 {
        return Ok(Solution { arcs: Vec::new(), cost: 0 });
    }
    let count = oracle_count_combinations(instance);
    if count > cap {
        return Err(OracleError::CapExceeded { count, cap });
    }
    let weights: Vec<Vec<Weight>> = (0..n).map(|v| distinct_weights(instance, v)).collect();
    if weights.iter().any(Vec::is_empty) {
        return Err(OracleError::Infeasible);
    }
    let checker = Checker::new(instance, &weights);
    let firsts: Vec<usize> = (0..weights[0].len()).collect();

    let results = exec::map(exec, &firsts, |&first| {
        let mut digits = vec![0usize; n];
        digits[0] = first;
        let mut best: Option<(u128, Vec<usize>)> = None;
        loop {
            if checker.connected(instance, &digits) {
                let cost: u128 = digits.iter().enumerate().map(|(v, &i)| weights[v][i] as u128).sum();
                if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    best = Some((cost, digits.clone()));
                }
            }
            // odometer over vertices 1..n, last vertex fastest
            let mut v = n - 1;
            loop {
                if v == 0 {
                    return best;
                }
                digits[v] += 1;
                if digits[v] < weights[v].len() {
                    break;
                }
                digits[v] = 0;
                v -= 1;
            }
        }
    });

    let (cost, digits) = results
        .into_iter()
        .flatten()
        .fold(None::<(u128, Vec<usize>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .ok_or(OracleError::Infeasible)?;
    let cost = Weight::try_from(cost).map_err(|_| OracleError::Overflow)?;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (v, &i) in digits.iter().enumerate() {
        let t = weights[v][i];
        for &id in instance.out_arcs(v) {
            let a = instance.arc(id);
            if a.weight <= t {
                arcs.push((a.tail, a.head));
            }
        }
    }
    arcs.sort_unstable();
    Ok(Solution { arcs, cost })
}

/// Optimum cost by enumerating all `2^m` arc subsets; for cross-checks on tiny inputs.
pub fn oracle_arc_subsets(instance: &Instance) -> Result<Weight, OracleError> {
    let m = instance.m();
    if m > MAX_SUBSET_ARCS {
        return Err(OracleError::TooManyArcs { m, max: MAX_SUBSET_ARCS });
    }
    if instance.n() <= 1 {
        return Ok(0);
    }
    let mut best: Option<u128> = None;
    for subset in 0u32..1 << m {
        let ids: Vec<ArcId> = (0..m).filter(|&i| subset >> i & 1 == 1).collect();
        if !instance.is_strongly_connected_arcs(&ids) {
            continue;
        }
        let mut top = vec![0u128; instance.n()];
        for &id in &ids {
            let a = instance.arc(id);
            top[a.tail] = top[a.tail].max(a.weight as u128);
        }
        let cost: u128 = top.iter().sum();
        best = Some(best.map_or(cost, |b| b.min(cost)));
    }
    let best = best.ok_or(OracleError::Infeasible)?;
    Weight::try_from(best).map_err(|_| OracleError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_solution;

    #[test]
    fn small_examples() {
        let t2 = Instance::from_triples(2, &[(0, 1, 2), (1, 0, 3)]).unwrap();
        assert_eq!(oracle_solve(&t2, DEFAULT_CAP, Exec::Sequential).unwrap().cost, 5);
        assert_eq!(oracle_count_combinations(&t2), 1);

        let c3 = Instance::from_triples(3, &[(0, 1, 1), (1, 2, 2), (2, 0, 3)]).unwrap();
        assert_eq!(oracle_solve(&c3, DEFAULT_CAP, Exec::Parallel).unwrap().cost, 6);
    }

    #[test]
    fn counts_distinct_weights_only() {
        let g = Instance::from_triples(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 0, 0), (2, 0, 0), (3, 0, 0)]).unwrap();
        assert_eq!(oracle_count_combinations(&g), 1);
        let mut t = Vec::new();
        for v in 0..4usize {
            t.push((v, (v + 1) % 4, 1));
            t.push((v, (v + 2) % 4, 2));
        }
        let g = Instance::from_triples(4, &t).unwrap();
        assert_eq!(oracle_count_combinations(&g), 16);
    }

    #[test]
    fn cap_is_reported() {
        let mut t = Vec::new();
        for v in 0..4usize {
            t.push((v, (v + 1) % 4, 1));
            t.push((v, (v + 2) % 4, 2));
        }
        let g = Instance::from_triples(4, &t).unwrap();
        assert_eq!(oracle_solve(&g, 15, Exec::Sequential), Err(OracleError::CapExceeded { count: 16, cap: 15 }));
    }

    #[test]
    fn agrees_with_subset_enumeration() {
        let g = Instance::from_triples(
            4,
            &[(0, 1, 3), (1, 2, 1), (2, 3, 4), (3, 0, 1), (1, 0, 2), (2, 1, 5), (0, 2, 1), (3, 1, 2)],
        )
        .unwrap();
        let s = oracle_solve(&g, DEFAULT_CAP, Exec::Sequential).unwrap();
        assert!(verify_solution(&g, &s).is_ok());
        assert_eq!(oracle_arc_subsets(&g).unwrap(), s.cost);
    }

    #[test]
    fn sink_vertex_is_infeasible() {
        let g = Instance::from_triples(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(oracle_solve(&g, DEFAULT_CAP, Exec::Sequential), Err(OracleError::Infeasible));
    }
}
