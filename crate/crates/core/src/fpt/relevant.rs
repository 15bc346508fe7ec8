use crate::bounds::ObligatorySubgraph;
use crate::graph::{ArcId, Instance, SccIndex, Weight};

/// Arc-reduced instance keeping, for every vertex `v` and every obligatory SCC
/// not containing `v`, only the lightest arc from `v` into that SCC.
///
/// The reduced instance has its own arc ids; [`RelevantSubgraph::origin`]
/// maps them back to the input instance.
#[derive(Debug, Clone)]
pub struct RelevantSubgraph {
    reduced: Instance,
    origin: Vec<ArcId>,
    scc: SccIndex,
    obligatory: Vec<ArcId>,
    obl_max: Vec<Weight>,
    residual: Vec<Weight>,
}

impl RelevantSubgraph {
    pub fn reduced(&self) -> &Instance {
        &self.reduced
    }

    /// Original arc id of a reduced arc.
    pub fn origin(&self, id: ArcId) -> ArcId {
        self.origin[id]
    }

    pub fn scc(&self) -> &SccIndex {
        &self.scc
    }

    pub fn component_count(&self) -> usize {
        self.scc.count()
    }

    /// Obligatory arcs, as ids of the original instance.
    pub fn obligatory_arcs(&self) -> &[ArcId] {
        &self.obligatory
    }

    pub fn obl_max(&self, v: usize) -> Weight {
        self.obl_max[v]
    }

    /// `max(0, w(vu) - oblMax(v))` for a reduced arc.
    pub fn residual(&self, id: ArcId) -> Weight {
        self.residual[id]
    }

    /// `Σ_v oblMax(v)`; what every vertex pays before any connector arc.
    pub fn baseline(&self) -> Option<Weight> {
        self.obl_max.iter().try_fold(0u64, |acc, &w| acc.checked_add(w))
    }
}

/// Drops every arc `vu'` that has a no-heavier sibling `vu` into the same
/// foreign obligatory SCC. Ties keep the arc listed first. Two passes over the arcs.
pub fn reduce_relevant(instance: &Instance, obligatory: &ObligatorySubgraph) -> RelevantSubgraph {
    let scc = obligatory.scc();
    let mut best: Vec<Option<ArcId>> = vec![None; scc.count()];
    let mut touched: Vec<usize> = Vec::new();
    let mut keep = vec![false; instance.m()];

    for v in 0..instance.n() {
        let own = scc.component_of(v);
        for &id in instance.out_arcs(v) {
            let a = instance.arc(id);
            let target = scc.component_of(a.head);
            if target == own {
                keep[id] = true;
                continue;
            }
            match best[target] {
                None => {
                    best[target] = Some(id);
                    touched.push(target);
                }
                Some(cur) if a.weight < instance.arc(cur).weight => best[target] = Some(id),
                Some(_) => {}
            }
        }
        for t in touched.drain(..) {
            if let Some(id) = best[t].take() {
                keep[id] = true;
            }
        }
    }

    let origin: Vec<ArcId> = (0..instance.m()).filter(|&id| keep[id]).collect();
    let reduced = instance.restrict(&origin);
    let obl_max = obligatory.obl_max_all().to_vec();
    let residual = reduced.arcs().iter().map(|a| a.weight.saturating_sub(obl_max[a.tail])).collect();
    RelevantSubgraph { reduced, origin, scc: scc.clone(), obligatory: obligatory.arcs().to_vec(), obl_max, residual }
}
