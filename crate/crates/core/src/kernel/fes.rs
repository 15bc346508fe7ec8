use std::collections::VecDeque;

use super::{gadget_weights, replay, KernelError, KernelJournal, PathRecord, Record};
use crate::graph::{Instance, UndirectedView, Weight};

fn journal_of(records: Vec<Record>) -> Result<KernelJournal, KernelError> {
    let mut journal = KernelJournal { records, offset: 0 };
    journal.offset = journal.record_sum().ok_or(KernelError::Overflow)?;
    Ok(journal)
}

fn apply(instance: &Instance, records: Vec<Record>) -> Result<(Instance, KernelJournal), KernelError> {
    let journal = journal_of(records)?;
    let kernel = replay(instance, &journal)?.kernel;
    Ok((kernel, journal))
}

/// Subtracts each vertex's minimum out-weight from all its out-arcs.
pub fn rule2_normalize(instance: &Instance) -> Result<(Instance, KernelJournal), KernelError> {
    let records = (0..instance.n())
        .filter_map(|v| instance.min_out_weight(v).filter(|&d| d > 0).map(|delta| Record::Normalize { v, delta }))
        .collect();
    apply(instance, records)
}

/// Removes `v`, whose only neighbour in the underlying graph is `u`: pays
/// `w(vu) + w(uv)` and lowers `u`'s other out-arcs by `w(uv)`.
pub fn rule3_degree1(instance: &Instance, v: usize) -> Result<(Instance, KernelJournal), KernelError> {
    let view = UndirectedView::new(instance);
    if v >= instance.n() || view.degree(v) != 1 {
        return Err(KernelError::NotPendant(v));
    }
    let u = view.neighbors(v)[0];
    let (Some(wvu), Some(wuv)) = (instance.weight(v, u), instance.weight(u, v)) else {
        return Err(KernelError::NotStronglyConnected);
    };
    apply(instance, vec![Record::Pendant { v, u, wvu, wuv }])
}

fn pendant_records(instance: &Instance) -> Result<Vec<Record>, KernelError> {
    let n = instance.n();
    let view = UndirectedView::new(instance);
    let mut deg: Vec<usize> = (0..n).map(|v| view.degree(v)).collect();
    let mut alive = vec![true; n];
    // amount already subtracted from each vertex's out-weights
    let mut shift: Vec<Weight> = vec![0; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut records = Vec::new();

    while let Some(v) = queue.pop_front() {
        if !alive[v] || deg[v] != 1 {
            continue;
        }
        let u = *view.neighbors(v).iter().find(|&&u| alive[u]).expect("degree one");
        let out = instance.out_arcs(v).iter().map(|&id| instance.arc(id)).find(|a| a.head == u);
        let inn = instance.in_arcs(v).iter().map(|&id| instance.arc(id)).find(|a| a.tail == u);
        let (Some(out), Some(inn)) = (out, inn) else {
            return Err(KernelError::NotStronglyConnected);
        };
        let wvu = out.weight.saturating_sub(shift[v]);
        let wuv = inn.weight.saturating_sub(shift[u]);
        records.push(Record::Pendant { v, u, wvu, wuv });
        alive[v] = false;
        shift[u] = shift[u].checked_add(wuv).ok_or(KernelError::Overflow)?;
        deg[u] -= 1;
        if deg[u] == 1 {
            queue.push_back(u);
        }
    }

    if alive.iter().filter(|&&a| a).count() >= 2 {
        for v in (0..n).filter(|&v| alive[v]) {
            let delta = instance
                .out_arcs(v)
                .iter()
                .map(|&id| instance.arc(id))
                .filter(|a| alive[a.head])
                .map(|a| a.weight.saturating_sub(shift[v]))
                .min()
                .unwrap_or(0);
            if delta > 0 {
                records.push(Record::Normalize { v, delta });
            }
        }
    }
    Ok(records)
}

/// Rules 2 and 3 to exhaustion in linear time.
///
/// Pendants are peeled from a worklist while each vertex keeps a running
/// subtraction for its out-weights; a final pass normalizes every surviving
/// vertex. The result has no vertex of degree one in the underlying graph and
/// every minimum out-weight is 0.
pub fn preprocess_linear(instance: &Instance) -> Result<(Instance, KernelJournal), KernelError> {
    if !instance.is_strongly_connected() {
        return Err(KernelError::NotStronglyConnected);
    }
    apply(instance, pendant_records(instance)?)
}

/// Maximal induced paths `v_0, ..., v_{h+1}` with at least one inner vertex,
/// in discovery order. Requires that the underlying graph is not a cycle.
fn induced_paths(view: &UndirectedView) -> Vec<Vec<usize>> {
    let n = view.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let walk = |start: usize, first: usize, seen: &mut Vec<bool>| {
        let mut chain = Vec::new();
        let (mut prev, mut cur) = (start, first);
        loop {
            chain.push(cur);
            if view.degree(cur) != 2 || cur == start {
                break;
            }
            seen[cur] = true;
            let nb = view.neighbors(cur);
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        chain
    };
    for x in 0..n {
        if view.degree(x) != 2 || seen[x] {
            continue;
        }
        seen[x] = true;
        let nb = view.neighbors(x);
        let left = walk(x, nb[0], &mut seen);
        let right = walk(x, nb[1], &mut seen);
        let mut path: Vec<usize> = left.into_iter().rev().collect();
        path.push(x);
        path.extend(right);
        let last = path.len() - 1;
        if (path[0], path[1]) > (path[last], path[last - 1]) {
            path.reverse();
        }
        out.push(path);
    }
    out
}

/// Path records for every maximal induced path with at least 7 inner
/// vertices, with gadget ids following the kernel numbering.
fn path_records(instance: &Instance) -> Vec<PathRecord> {
    let view = UndirectedView::new(instance);
    let long: Vec<Vec<usize>> = induced_paths(&view).into_iter().filter(|p| p.len() - 2 >= 7).collect();
    let removed: usize = long.iter().map(|p| p.len() - 4).sum();
    let base = instance.n() - removed;
    long.into_iter()
        .enumerate()
        .map(|(j, path)| {
            let h = path.len() - 2;
            let forward: Vec<Option<Weight>> = (1..h).map(|i| instance.weight(path[i], path[i + 1])).collect();
            let backward: Vec<Option<Weight>> = (1..h).map(|i| instance.weight(path[i + 1], path[i])).collect();
            let k = gadget_weights(&forward, &backward).k;
            let g = base + 4 * j;
            PathRecord { path, forward, backward, k, gadget: [g, g + 1, g + 2, g + 3] }
        })
        .collect()
}

/// Replaces the inner vertices of every maximal induced path with at least 7
/// of them by a path gadget. Expects a preprocessed instance that is not a cycle.
pub fn rule4_replace_paths(instance: &Instance) -> Result<(Instance, KernelJournal), KernelError> {
    let view = UndirectedView::new(instance);
    if view.is_cycle() {
        return Err(KernelError::UnexpectedCycle);
    }
    let records = path_records(instance).into_iter().map(Record::Path).collect();
    apply(instance, records)
}

/// Kernel for the feedback edge number `g`: preprocessing, then either a
/// cycle marker or path gadgets. For `g >= 2` the kernel has at most
/// `20g - 20` vertices and `42g - 42` arcs.
pub fn kernelize_fes(instance: &Instance) -> Result<(Instance, KernelJournal), KernelError> {
    if !instance.is_strongly_connected() {
        return Err(KernelError::NotStronglyConnected);
    }
    let mut records = pendant_records(instance)?;
    let first = replay(instance, &journal_of(records.clone())?)?;
    let reduced = first.kernel;
    if UndirectedView::new(&reduced).is_cycle() {
        records.push(Record::Cycle);
        return Ok((reduced, journal_of(records)?));
    }
    for mut p in path_records(&reduced) {
        for v in p.path.iter_mut() {
            *v = first.kernel_to_ext[*v];
        }
        records.push(Record::Path(p));
    }
    apply(instance, records)
}

/// Shape of the underlying graph after preprocessing: vertices of degree at
/// least 3, and maximal induced paths (an edge between two such vertices
/// counts as a path without inner vertices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCensus {
    pub high_degree: usize,
    pub paths: usize,
    pub longest: usize,
}

pub fn path_census(instance: &Instance) -> PathCensus {
    let view = UndirectedView::new(instance);
    let high: Vec<usize> = (0..view.n()).filter(|&v| view.degree(v) >= 3).collect();
    let ends: usize = high.iter().map(|&v| view.degree(v)).sum();
    let longest = if view.is_cycle() { 0 } else { induced_paths(&view).iter().map(|p| p.len() - 2).max().unwrap_or(0) };
    PathCensus { high_degree: high.len(), paths: ends / 2, longest }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::graph::feedback_edge_number;
    use crate::kernel::lift_solution;
    use crate::oracle::{oracle_solve, DEFAULT_CAP};

    fn opt(g: &Instance) -> Weight {
        oracle_solve(g, DEFAULT_CAP, Exec::Sequential).unwrap().cost
    }

    #[test]
    fn normalize_examples() {
        let g = Instance::from_triples(3, &[(0, 1, 3), (0, 2, 5), (1, 0, 0), (1, 2, 4), (2, 0, 1)]).unwrap();
        let (k, j) = rule2_normalize(&g).unwrap();
        assert_eq!(k.weight(0, 1), Some(0));
        assert_eq!(k.weight(0, 2), Some(2));
        assert_eq!(k.weight(1, 2), Some(4));
        assert_eq!(j.offset, 4);

        let t2 = Instance::from_triples(2, &[(0, 1, 2), (1, 0, 3)]).unwrap();
        let (k, j) = rule2_normalize(&t2).unwrap();
        assert_eq!(j.offset, 5);
        assert_eq!(opt(&k) + j.offset, opt(&t2));
    }

    #[test]
    fn pendant_example() {
        // v = 0 hangs off u = 1; u also reaches 2 and 3 at weights 1 and 6
        let g = Instance::from_triples(
            4,
            &[(0, 1, 2), (1, 0, 4), (1, 2, 1), (1, 3, 6), (2, 1, 0), (3, 1, 0), (2, 3, 0), (3, 2, 0)],
        )
        .unwrap();
        let (k, j) = rule3_degree1(&g, 0).unwrap();
        assert_eq!(j.offset, 6);
        assert_eq!(k.n(), 3);
        assert_eq!(k.weight(0, 1), Some(0));
        assert_eq!(k.weight(0, 2), Some(2));
        assert_eq!(opt(&k) + j.offset, opt(&g));
        assert!(matches!(rule3_degree1(&g, 1), Err(KernelError::NotPendant(1))));
    }

    #[test]
    fn trees_collapse() {
        let g = Instance::from_triples(3, &[(0, 1, 2), (1, 0, 1), (1, 2, 3), (2, 1, 5)]).unwrap();
        let (k, j) = preprocess_linear(&g).unwrap();
        assert_eq!(k.n(), 1);
        // every arc is forced; vertex 1 pays max(1, 3)
        assert_eq!(j.offset, 10);
        assert_eq!(opt(&g), 10);
    }

    #[test]
    fn preprocessed_graph_is_left_alone() {
        let g = Instance::from_triples(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0), (1, 0, 3)]).unwrap();
        let (k, j) = preprocess_linear(&g).unwrap();
        assert_eq!(k, g);
        assert_eq!(j.offset, 0);
        assert!(j.records.is_empty());
    }

    fn long_theta() -> Instance {
        // two hubs 0 and 1 joined by a path with 8 inner vertices (2..=9)
        // and by two direct bidirectional 2-paths through 10 and 11
        let mut t = Vec::new();
        let chain = [0, 2, 3, 4, 5, 6, 7, 8, 9, 1];
        for (i, w) in chain.windows(2).enumerate() {
            t.push((w[0], w[1], (i % 3) as u64));
            t.push((w[1], w[0], ((i + 1) % 2) as u64));
        }
        for (mid, a, b) in [(10, 2, 1), (11, 0, 3)] {
            t.push((0, mid, a));
            t.push((mid, 0, 1));
            t.push((mid, 1, b));
            t.push((1, mid, 0));
        }
        Instance::from_triples(12, &t).unwrap()
    }

    #[test]
    fn long_path_gets_a_gadget() {
        let g = long_theta();
        assert_eq!(feedback_edge_number(&g), 2);
        let (k, j) = kernelize_fes(&g).unwrap();
        let paths = j.records.iter().filter(|r| matches!(r, Record::Path(_))).count();
        assert_eq!(paths, 1);
        assert!(k.n() <= 20 && k.m() <= 42);
        let kopt = oracle_solve(&k, DEFAULT_CAP, Exec::Sequential).unwrap();
        assert_eq!(kopt.cost + j.offset, opt(&g));
        let lifted = lift_solution(&g, &j, &kopt).unwrap();
        assert_eq!(lifted.cost, opt(&g));
    }

    #[test]
    fn short_paths_are_kept() {
        let mut t = Vec::new();
        let chain = [0, 2, 3, 4, 5, 6, 7, 1];
        for w in chain.windows(2) {
            t.push((w[0], w[1], 1));
            t.push((w[1], w[0], 0));
        }
        for mid in [8, 9] {
            t.extend([(0, mid, 0), (mid, 0, 0), (mid, 1, 0), (1, mid, 0)]);
        }
        let g = Instance::from_triples(10, &t).unwrap();
        let (k, j) = kernelize_fes(&g).unwrap();
        assert!(j.records.is_empty());
        assert_eq!(k, g);
        assert_eq!(path_census(&k), PathCensus { high_degree: 2, paths: 3, longest: 6 });
    }

    #[test]
    fn cycles_are_marked() {
        let g = Instance::from_triples(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (3, 4, 2), (4, 3, 0)]).unwrap();
        let (k, j) = kernelize_fes(&g).unwrap();
        assert!(j.is_cycle());
        assert_eq!(k.n(), 4);
    }
}
