use super::connector::{ConnectorTable, INF};
use super::relevant::RelevantSubgraph;
use super::FptError;
use crate::graph::{ArcId, Weight};

/// All compositions of `total` into `parts` positive summands, lexicographically.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = Vec::with_capacity(parts);
    compose(total, parts, &mut cur, &mut out);
    out
}

fn compose(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        if left >= 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    for first in 1..=left.saturating_sub(parts - 1) {
        cur.push(first);
        compose(left - first, parts - 1, cur, out);
        cur.pop();
    }
}

/// One candidate `T_S` for an SCC: its local mask, global mask and cost.
#[derive(Clone, Copy)]
struct Choice {
    local: usize,
    global: u64,
    cost: Weight,
}

/// The chosen target sets, one local mask per SCC, and their total marginal cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub targets: Vec<usize>,
    pub cost: u128,
}

/// True iff the graph on `c <= 64` nodes with successor masks `out` is strongly connected.
pub(crate) fn masks_strongly_connected(out: &[u64]) -> bool {
    let c = out.len();
    if c <= 1 {
        return true;
    }
    let full = if c == 64 { u64::MAX } else { (1u64 << c) - 1 };
    let mut inn = vec![0u64; c];
    for (i, &m) in out.iter().enumerate() {
        let mut rest = m;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            inn[j] |= 1 << i;
        }
    }
    closure(out, full) && closure(&inn, full)
}

fn closure(adj: &[u64], full: u64) -> bool {
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut rest = frontier;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            next |= adj[i];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen & full == full
}

struct Search<'a> {
    /// per SCC, per subset size: candidates in ascending local-mask order
    by_size: &'a [Vec<Vec<Choice>>],
    sizes: &'a [usize],
    picked: Vec<Choice>,
    out: Vec<u64>,
    best: Option<Configuration>,
}

impl Search<'_> {
    fn descend(&mut self, i: usize, partial: u128) {
        let c = self.sizes.len();
        if i == c {
            if masks_strongly_connected(&self.out) {
                let better = self.best.as_ref().is_none_or(|b| partial < b.cost);
                if better {
                    self.best =
                        Some(Configuration { targets: self.picked.iter().map(|p| p.local).collect(), cost: partial });
                }
            }
            return;
        }
        let k = self.sizes[i];
        let Some(options) = self.by_size[i].get(k) else { return };
        for &choice in options {
            let total = partial + choice.cost as u128;
            if self.best.as_ref().is_some_and(|b| total >= b.cost) {
                continue;
            }
            self.picked[i] = choice;
            self.out[i] = choice.global;
            self.descend(i + 1, total);
        }
    }
}

/// Exhaustive search over target-set configurations: total out-degree `k`
/// from `c` to `2c - 2`, every composition of `k` over the SCCs, every subset
/// of the prescribed size. Keeps the first cheapest configuration whose
/// auxiliary graph on the SCCs is strongly connected.
pub fn search_configuration(rel: &RelevantSubgraph, table: &ConnectorTable) -> Result<Configuration, FptError> {
    let c = rel.component_count();
    if c < 2 {
        return Ok(Configuration { targets: vec![0; c], cost: 0 });
    }
    let by_size: Vec<Vec<Vec<Choice>>> = table
        .iter()
        .map(|scc| {
            let s = scc.sdom().len();
            let mut groups = vec![Vec::new(); s + 1];
            for local in 0..1usize << s {
                let cost = scc.cost(local);
                if cost == INF {
                    continue;
                }
                groups[local.count_ones() as usize].push(Choice { local, global: scc.global_mask(local), cost });
            }
            groups
        })
        .collect();

    let mut best: Option<Configuration> = None;
    for k in c..=2 * c - 2 {
        for sizes in compositions(k, c) {
            let mut search = Search {
                by_size: &by_size,
                sizes: &sizes,
                picked: vec![Choice { local: 0, global: 0, cost: 0 }; c],
                out: vec![0; c],
                best: best.take(),
            };
            search.descend(0, 0);
            best = search.best;
        }
    }
    best.ok_or(FptError::NotStronglyConnected)
}

/// Reduced arc ids of the connectors selected by a configuration, mapped to original ids.
pub fn configuration_arcs(rel: &RelevantSubgraph, table: &ConnectorTable, config: &Configuration) -> Vec<ArcId> {
    table.iter().zip(&config.targets).flat_map(|(scc, &local)| scc.arcs(local)).map(|id| rel.origin(id)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 3), vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(compositions(2, 2), vec![vec![1, 1]]);
        assert_eq!(compositions(6, 4).len(), 10);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn mask_connectivity() {
        assert!(masks_strongly_connected(&[0b10, 0b100, 0b1]));
        assert!(!masks_strongly_connected(&[0b10, 0b100, 0b10]));
        assert!(masks_strongly_connected(&[0b10, 0b1]));
        assert!(masks_strongly_connected(&[0]));
    }
}
