use super::KernelError;
use crate::graph::{total_cost, ArcId, Instance, Solution, UndirectedView, Weight};

/// Exact solution when the underlying graph is a single cycle.
///
/// Three candidates: every arc in one direction, every arc in the other, or
/// both directions minus the pair with the largest weight after subtracting
/// each vertex's minimum out-weight. The cheapest feasible one wins, in that
/// order on ties.
pub fn solve_cycle(instance: &Instance) -> Result<Solution, KernelError> {
    let view = UndirectedView::new(instance);
    if !view.is_cycle() {
        return Err(KernelError::NotACycle);
    }
    let n = instance.n();
    let mut order = Vec::with_capacity(n);
    let (mut prev, mut cur) = (usize::MAX, 0usize);
    for _ in 0..n {
        order.push(cur);
        let nb = view.neighbors(cur);
        let next = if nb[0] != prev { nb[0] } else { nb[1] };
        prev = cur;
        cur = next;
    }

    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    let fwd: Vec<Option<ArcId>> = pairs.iter().map(|&(a, b)| instance.find_arc(a, b)).collect();
    let bwd: Vec<Option<ArcId>> = pairs.iter().map(|&(a, b)| instance.find_arc(b, a)).collect();
    let reduced = |id: ArcId| -> u128 {
        let a = instance.arc(id);
        (a.weight - instance.min_out_weight(a.tail).unwrap_or(0)) as u128
    };

    let mut candidates: Vec<Vec<ArcId>> = Vec::new();
    if let Some(all) = fwd.iter().copied().collect::<Option<Vec<_>>>() {
        candidates.push(all);
    }
    if let Some(all) = bwd.iter().copied().collect::<Option<Vec<_>>>() {
        candidates.push(all);
    }
    // pair sums with a missing arc count as infinite
    let sum = |i: usize| Some(reduced(fwd[i]?) + reduced(bwd[i]?));
    let mut k = 0;
    for i in 1..n {
        let larger = match (sum(i), sum(k)) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        };
        if larger {
            k = i;
        }
    }
    let rest: Option<Vec<ArcId>> = (0..n).filter(|&i| i != k).flat_map(|i| [fwd[i], bwd[i]]).collect();
    if let Some(both) = rest {
        candidates.push(both);
    }

    let mut best: Option<(Weight, Vec<ArcId>)> = None;
    for ids in candidates {
        if !instance.is_strongly_connected_arcs(&ids) {
            continue;
        }
        let cost = total_cost(instance, &ids)?;
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, ids));
        }
    }
    let (_, ids) = best.ok_or(KernelError::NotStronglyConnected)?;
    Ok(Solution::from_arc_ids(instance, &ids)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_cycle() {
        let g = Instance::from_triples(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4)]).unwrap();
        let s = solve_cycle(&g).unwrap();
        assert_eq!(s.cost, 10);
        assert_eq!(s.arcs.len(), 4);
    }

    #[test]
    fn cheap_direction_wins() {
        let mut t = Vec::new();
        for i in 0..5usize {
            t.push((i, (i + 1) % 5, 1));
            t.push(((i + 1) % 5, i, 0));
        }
        let g = Instance::from_triples(5, &t).unwrap();
        assert_eq!(solve_cycle(&g).unwrap().cost, 0);
    }

    #[test]
    fn dropping_a_pair() {
        // both directions cost 3 each way around; dropping the heavy pair is cheaper
        let t = [(0, 1, 0), (1, 0, 0), (1, 2, 0), (2, 1, 0), (2, 3, 0), (3, 2, 0), (3, 0, 9), (0, 3, 9)];
        let g = Instance::from_triples(4, &t).unwrap();
        assert_eq!(solve_cycle(&g).unwrap().cost, 0);
    }

    #[test]
    fn rejects_non_cycles() {
        let g = Instance::from_triples(2, &[(0, 1, 0), (1, 0, 0)]).unwrap();
        assert_eq!(solve_cycle(&g), Err(KernelError::NotACycle));
    }
}
