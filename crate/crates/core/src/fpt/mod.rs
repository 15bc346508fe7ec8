//! Exact solver parameterized by the number of obligatory SCCs.

mod connector;
mod relevant;
mod search;

use std::time::{Duration, Instant};

use thiserror::Error;

pub use connector::{connector_dp, ConnectorTable, SccConnectors};
pub use relevant::{reduce_relevant, RelevantSubgraph};
pub use search::{compositions, configuration_arcs, search_configuration, Configuration};

use crate::bounds::{obligatory_subgraph, LowerBound};
use crate::exec::Exec;
use crate::graph::{GraphError, Instance, Solution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FptError {
    #[error("{components} obligatory components exceed the cap of {cap}")]
    CapExceeded { components: usize, cap: usize },
    #[error("connector tables need about {bytes} bytes, cap is {cap}")]
    TableTooLarge { bytes: usize, cap: usize },
    #[error("instance is not strongly connected")]
    NotStronglyConnected,
    #[error("lower bound has {got} entries for {n} vertices")]
    BoundLength { got: usize, n: usize },
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FptConfig {
    /// Largest number of obligatory SCCs accepted (at most 64).
    pub max_components: usize,
    /// Upper bound on the estimated connector table memory, in bytes.
    pub max_table_bytes: usize,
    pub exec: Exec,
}

impl Default for FptConfig {
    fn default() -> Self {
        FptConfig { max_components: 20, max_table_bytes: 1 << 30, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub reduce: Duration,
    pub connectors: Duration,
    pub search: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptOutcome {
    pub solution: Solution,
    /// Number of obligatory SCCs.
    pub components: usize,
    pub times: PhaseTimes,
}

/// Solves MinPAC exactly. Running time is exponential only in the number of
/// SCCs of the obligatory subgraph induced by `lb`, which must be a sound bound.
pub fn solve_minpac(instance: &Instance, lb: &LowerBound, config: &FptConfig) -> Result<FptOutcome, FptError> {
    let n = instance.n();
    if lb.values().len() != n {
        return Err(FptError::BoundLength { got: lb.values().len(), n });
    }
    let mut times = PhaseTimes::default();
    if n <= 1 {
        return Ok(FptOutcome { solution: Solution { arcs: Vec::new(), cost: 0 }, components: n, times });
    }
    if !instance.is_strongly_connected() {
        return Err(FptError::NotStronglyConnected);
    }

    let t = Instant::now();
    let obl = obligatory_subgraph(instance, lb);
    let c = obl.component_count();
    if c == 1 {
        let solution = Solution::from_arc_ids(instance, obl.arcs())?;
        times.reduce = t.elapsed();
        return Ok(FptOutcome { solution, components: 1, times });
    }
    if c > config.max_components || c > 64 {
        return Err(FptError::CapExceeded { components: c, cap: config.max_components.min(64) });
    }
    let rel = reduce_relevant(instance, &obl);
    times.reduce = t.elapsed();

    let t = Instant::now();
    let table = connector_dp(&rel, config)?;
    times.connectors = t.elapsed();

    let t = Instant::now();
    let best = search_configuration(&rel, &table)?;
    let mut ids = rel.obligatory_arcs().to_vec();
    ids.extend(configuration_arcs(&rel, &table, &best));
    let solution = Solution::from_arc_ids(instance, &ids)?;
    times.search = t.elapsed();
    debug_assert_eq!(rel.baseline().map(|b| b as u128 + best.cost), Some(solution.cost as u128));

    Ok(FptOutcome { solution, components: c, times })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{lb_trivial, lb_unique_in_arc};
    use crate::graph::verify_solution;

    fn solve(g: &Instance) -> FptOutcome {
        solve_minpac(g, &lb_unique_in_arc(g), &FptConfig::default()).unwrap()
    }

    #[test]
    fn forced_two_cycle() {
        let g = Instance::from_triples(2, &[(0, 1, 2), (1, 0, 3)]).unwrap();
        assert_eq!(solve(&g).solution.cost, 5);
    }

    #[test]
    fn zero_cycle_with_heavy_chords() {
        let g = Instance::from_triples(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0), (0, 2, 9), (2, 1, 9)]).unwrap();
        let out = solve(&g);
        assert_eq!(out.solution.cost, 0);
        assert_eq!(out.components, 1);
    }

    #[test]
    fn single_vertex() {
        let g = Instance::from_triples(1, &[]).unwrap();
        let out = solve(&g);
        assert_eq!(out.solution.cost, 0);
        assert!(out.solution.arcs.is_empty());
    }

    #[test]
    fn triangle_of_components() {
        // three zero 2-cycles joined by a bidirectional triangle of weight-1 arcs
        let mut t = vec![(0, 1, 0), (1, 0, 0), (2, 3, 0), (3, 2, 0), (4, 5, 0), (5, 4, 0)];
        t.extend([(1, 2, 1), (2, 1, 1), (3, 4, 1), (4, 3, 1), (5, 0, 1), (0, 5, 1)]);
        let g = Instance::from_triples(6, &t).unwrap();
        let out = solve_minpac(&g, &lb_trivial(&g), &FptConfig::default()).unwrap();
        assert_eq!(out.components, 3);
        assert_eq!(out.solution.cost, 3);
        assert!(verify_solution(&g, &out.solution).is_ok());
    }

    #[test]
    fn rejects_disconnected_input() {
        let g = Instance::from_triples(3, &[(0, 1, 0), (1, 0, 0), (1, 2, 0)]).unwrap();
        let r = solve_minpac(&g, &lb_trivial(&g), &FptConfig::default());
        assert_eq!(r.unwrap_err(), FptError::NotStronglyConnected);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut t = vec![(0, 1, 0), (1, 0, 0), (2, 3, 0), (3, 2, 0), (4, 5, 0), (5, 4, 0)];
        t.extend([(1, 2, 2), (2, 1, 1), (3, 4, 4), (4, 3, 1), (5, 0, 1), (0, 5, 3), (0, 3, 5)]);
        let g = Instance::from_triples(6, &t).unwrap();
        let lb = lb_trivial(&g);
        let seq = FptConfig { exec: Exec::Sequential, ..FptConfig::default() };
        let par = FptConfig { exec: Exec::Parallel, ..FptConfig::default() };
        let a = solve_minpac(&g, &lb, &seq).unwrap().solution;
        let b = solve_minpac(&g, &lb, &par).unwrap().solution;
        assert_eq!(a, b);
    }
}
