//! Minimum-cost connectors: for every obligatory SCC `S` and every set `T` of
//! SCCs reachable from `S` by one arc, the cheapest arc set leaving `S` that
//! hits every member of `T`, priced under residual weights.

use super::relevant::RelevantSubgraph;
use super::{FptConfig, FptError};
use crate::exec;
use crate::graph::{ArcId, Weight};

pub(crate) const INF: Weight = Weight::MAX;
const NONE: u32 = u32::MAX;

/// Connector table of one SCC, indexed by subsets of `sdom` encoded as local
/// bit masks (bit `j` stands for `sdom[j]`).
#[derive(Debug, Clone)]
pub struct SccConnectors {
    component: usize,
    vertices: Vec<usize>,
    sdom: Vec<usize>,
    /// `arc_to[i * s + j]`: reduced arc from `vertices[i]` into `sdom[j]`.
    arc_to: Vec<ArcId>,
    cost: Vec<Weight>,
    /// `source[mask * s + j]`: index into `vertices` of the vertex covering `sdom[j]`.
    source: Vec<u32>,
}

impl SccConnectors {
    pub fn component(&self) -> usize {
        self.component
    }

    /// Vertices of the SCC in ascending order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn sdom(&self) -> &[usize] {
        &self.sdom
    }

    pub fn entry_count(&self) -> usize {
        self.cost.len()
    }

    /// Marginal (residual) cost of `mcc(S, T)` for a local mask.
    pub fn cost(&self, local: usize) -> Weight {
        self.cost[local]
    }

    /// Arcs of `mcc(S, T)` (reduced arc ids) for a local mask.
    pub fn arcs(&self, local: usize) -> Vec<ArcId> {
        let s = self.sdom.len();
        (0..s)
            .filter(|j| local >> j & 1 == 1)
            .map(|j| {
                let i = self.source[local * s + j] as usize;
                self.arc_to[i * s + j]
            })
            .collect()
    }

    /// Translates a local mask into a mask over global component ids.
    pub fn global_mask(&self, local: usize) -> u64 {
        self.sdom.iter().enumerate().filter(|(j, _)| local >> j & 1 == 1).fold(0u64, |acc, (_, &c)| acc | 1 << c)
    }

    /// Inverse of [`global_mask`](Self::global_mask); `None` if `global` is not a subset of `sdom`.
    pub fn local_mask(&self, global: u64) -> Option<usize> {
        let mut local = 0usize;
        let mut rest = global;
        for (j, &c) in self.sdom.iter().enumerate() {
            if rest >> c & 1 == 1 {
                local |= 1 << j;
                rest &= !(1u64 << c);
            }
        }
        (rest == 0).then_some(local)
    }
}

#[derive(Debug, Clone)]
pub struct ConnectorTable {
    per_scc: Vec<SccConnectors>,
}

impl ConnectorTable {
    pub fn scc(&self, component: usize) -> &SccConnectors {
        &self.per_scc[component]
    }

    pub fn iter(&self) -> impl Iterator<Item = &SccConnectors> {
        self.per_scc.iter()
    }

    pub fn len(&self) -> usize {
        self.per_scc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_scc.is_empty()
    }
}

/// Local view of one SCC used while filling its table.
struct Frame {
    vertices: Vec<usize>,
    sdom: Vec<usize>,
    /// per vertex: `(j, residual, reduced arc id)` in arc-id order
    foreign: Vec<Vec<(usize, Weight, ArcId)>>,
}

fn frames(rel: &RelevantSubgraph) -> Vec<Frame> {
    let g = rel.reduced();
    let scc = rel.scc();
    let c = scc.count();
    let mut pos = vec![usize::MAX; c];
    let mut out = Vec::with_capacity(c);
    for (comp, members) in scc.components().iter().enumerate() {
        let mut present = vec![false; c];
        for &v in members {
            for &id in g.out_arcs(v) {
                let t = scc.component_of(g.arc(id).head);
                if t != comp {
                    present[t] = true;
                }
            }
        }
        let sdom: Vec<usize> = (0..c).filter(|&t| present[t]).collect();
        for (j, &t) in sdom.iter().enumerate() {
            pos[t] = j;
        }
        let foreign = members
            .iter()
            .map(|&v| {
                g.out_arcs(v)
                    .iter()
                    .filter_map(|&id| {
                        let t = scc.component_of(g.arc(id).head);
                        (t != comp).then(|| (pos[t], rel.residual(id), id))
                    })
                    .collect()
            })
            .collect();
        out.push(Frame { vertices: members.clone(), sdom, foreign });
    }
    out
}

fn table_bytes(s: usize) -> usize {
    // final table plus two rolling tables
    3usize.saturating_mul(1usize << s.min(usize::BITS as usize - 1)).saturating_mul(8 + 4 * s)
}

/// Fills the connector table of every obligatory SCC.
///
/// Each SCC runs a forward sweep recording which vertex first reaches each
/// foreign SCC, then refines the table vertex by vertex: the entry for `T`
/// after vertex `v_i` is either the entry before `v_i`, or `v_i` paying the
/// residual of one of its arcs `v_i u`, covering every foreign SCC reachable
/// by an arc no heavier than `v_i u`, plus the earlier entry for the rest of `T`.
pub fn connector_dp(rel: &RelevantSubgraph, config: &FptConfig) -> Result<ConnectorTable, FptError> {
    let c = rel.component_count();
    if c > config.max_components || c > 64 {
        return Err(FptError::CapExceeded { components: c, cap: config.max_components.min(64) });
    }
    let frames = frames(rel);
    let bytes = frames.iter().fold(0usize, |acc, f| acc.saturating_add(table_bytes(f.sdom.len())));
    if bytes > config.max_table_bytes {
        return Err(FptError::TableTooLarge { bytes, cap: config.max_table_bytes });
    }
    let tables = exec::map(config.exec, &frames, fill);
    let per_scc = tables
        .into_iter()
        .zip(frames)
        .enumerate()
        .map(|(component, (res, frame))| {
            res.map(|(cost, source, arc_to)| SccConnectors {
                component,
                vertices: frame.vertices,
                sdom: frame.sdom,
                arc_to,
                cost,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConnectorTable { per_scc })
}

type Filled = (Vec<Weight>, Vec<u32>, Vec<ArcId>);

fn fill(frame: &Frame) -> Result<Filled, FptError> {
    let s = frame.sdom.len();
    let n_s = frame.vertices.len();
    let size = 1usize << s;

    let mut arc_to = vec![usize::MAX; n_s * s];
    for (i, arcs) in frame.foreign.iter().enumerate() {
        for &(j, _, id) in arcs {
            arc_to[i * s + j] = id;
        }
    }

    // Initialization sweep: B_i keeps the first arc into each newly reached SCC.
    let mut reached = vec![0usize; n_s + 1];
    let mut first_source = vec![NONE; s];
    for (i, arcs) in frame.foreign.iter().enumerate() {
        let mut tb = reached[i];
        for &(j, _, _) in arcs {
            if tb >> j & 1 == 0 {
                tb |= 1 << j;
                first_source[j] = i as u32;
            }
        }
        reached[i + 1] = tb;
    }

    let mut prev_cost = vec![INF; size];
    let mut prev_src = vec![NONE; size * s];
    prev_cost[0] = 0;
    let mut cur_cost = vec![INF; size];
    let mut cur_src = vec![NONE; size * s];

    for (i, arcs) in frame.foreign.iter().enumerate() {
        let before = reached[i];
        let after = reached[i + 1];

        // Start of step i: carry D_{i-1} on subsets it covers, the sweep's
        // B_i-based connector on the newly reachable subsets, undefined elsewhere.
        for t in 0..size {
            let dst = &mut cur_src[t * s..(t + 1) * s];
            if t & !before == 0 {
                cur_cost[t] = prev_cost[t];
                dst.copy_from_slice(&prev_src[t * s..(t + 1) * s]);
            } else if t & !after == 0 {
                let (cost, src) = initial_entry(frame, &first_source, t)?;
                cur_cost[t] = cost;
                for j in 0..s {
                    dst[j] = if t >> j & 1 == 1 { src[j] } else { NONE };
                }
            } else {
                cur_cost[t] = INF;
                dst.fill(NONE);
            }
        }

        for &(_, pay, _) in arcs {
            let covered = arcs.iter().filter(|&&(_, r, _)| r <= pay).fold(0usize, |m, &(j, _, _)| m | 1 << j);
            let allowed = before | covered;
            // every subset of `allowed`, including the empty set
            let mut t = allowed;
            loop {
                let rest = t & !covered;
                let base = prev_cost[rest];
                if base != INF {
                    let cand = base.checked_add(pay).ok_or(FptError::Overflow)?;
                    if cand < cur_cost[t] {
                        cur_cost[t] = cand;
                        for j in 0..s {
                            cur_src[t * s + j] = if rest >> j & 1 == 1 {
                                prev_src[rest * s + j]
                            } else if t >> j & 1 == 1 {
                                i as u32
                            } else {
                                NONE
                            };
                        }
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & allowed;
            }
        }

        std::mem::swap(&mut prev_cost, &mut cur_cost);
        std::mem::swap(&mut prev_src, &mut cur_src);
    }

    Ok((prev_cost, prev_src, arc_to))
}

/// Connector built from the first-reaching arcs only, with its residual cost.
fn initial_entry(frame: &Frame, first_source: &[u32], t: usize) -> Result<(Weight, Vec<u32>), FptError> {
    let s = frame.sdom.len();
    let mut pay: Vec<(u32, Weight)> = Vec::new();
    let mut src = vec![NONE; s];
    for j in 0..s {
        if t >> j & 1 == 0 {
            continue;
        }
        let i = first_source[j];
        src[j] = i;
        let r = frame.foreign[i as usize]
            .iter()
            .find(|&&(jj, _, _)| jj == j)
            .map(|&(_, r, _)| r)
            .expect("first source has an arc into j");
        match pay.iter_mut().find(|(v, _)| *v == i) {
            Some((_, w)) => *w = (*w).max(r),
            None => pay.push((i, r)),
        }
    }
    let cost = pay.iter().try_fold(0u64, |acc, &(_, w)| acc.checked_add(w)).ok_or(FptError::Overflow)?;
    Ok((cost, src))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{obligatory_subgraph, LowerBound};
    use crate::fpt::relevant::reduce_relevant;
    use crate::graph::Instance;

    fn table(g: &Instance) -> (RelevantSubgraph, ConnectorTable) {
        let obl = obligatory_subgraph(g, &LowerBound::new(vec![0; g.n()]));
        let rel = reduce_relevant(g, &obl);
        let t = connector_dp(&rel, &FptConfig::default()).unwrap();
        (rel, t)
    }

    #[test]
    fn two_vertex_component_with_two_targets() {
        // S = {0,1} (zero 2-cycle), X = {2}, Y = {3}; a->X w1, a->Y w2, b->Y w1
        let g =
            Instance::from_triples(4, &[(0, 1, 0), (1, 0, 0), (0, 2, 1), (0, 3, 2), (1, 3, 1), (2, 0, 0), (3, 0, 0)])
                .unwrap();
        let (rel, t) = table(&g);
        let s = t.scc(rel.scc().component_of(0));
        let x = s.local_mask(1 << rel.scc().component_of(2)).unwrap();
        let y = s.local_mask(1 << rel.scc().component_of(3)).unwrap();
        assert_eq!(s.cost(x), 1);
        assert_eq!(s.cost(y), 1);
        assert_eq!(s.cost(x | y), 2);
        assert_eq!(s.cost(0), 0);
        assert!(s.arcs(0).is_empty());
    }

    #[test]
    fn empty_sdom_has_only_the_empty_entry() {
        let g = Instance::from_triples(2, &[(0, 1, 0), (1, 0, 0)]).unwrap();
        let (_, t) = table(&g);
        assert_eq!(t.len(), 1);
        assert_eq!(t.scc(0).entry_count(), 1);
        assert_eq!(t.scc(0).cost(0), 0);
    }

    #[test]
    fn single_vertex_component() {
        // {0} -> {1,2} with weight 4; 0's only out-arc, so the bound lifts it
        // use a zero bound to keep components apart
        let g = Instance::from_triples(3, &[(0, 1, 4), (1, 2, 0), (2, 1, 0), (2, 0, 3)]).unwrap();
        let (rel, t) = table(&g);
        let s = t.scc(rel.scc().component_of(0));
        assert_eq!(s.sdom().len(), 1);
        assert_eq!(s.cost(1), 4);
        let arcs = s.arcs(1);
        assert_eq!(arcs.len(), 1);
        assert_eq!(rel.origin(arcs[0]), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Instance::from_triples(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let obl = obligatory_subgraph(&g, &LowerBound::new(vec![0; 3]));
        let rel = reduce_relevant(&g, &obl);
        let cfg = FptConfig { max_components: 2, ..FptConfig::default() };
        assert!(matches!(connector_dp(&rel, &cfg), Err(FptError::CapExceeded { components: 3, .. })));
        let cfg = FptConfig { max_table_bytes: 10, ..FptConfig::default() };
        assert!(matches!(connector_dp(&rel, &cfg), Err(FptError::TableTooLarge { .. })));
    }
}
