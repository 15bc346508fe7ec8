//! Vertex lower bounds and the obligatory subgraph they induce.

use std::fmt;
use std::str::FromStr;

use crate::graph::{ArcId, Instance, SccIndex, Weight};

/// Per-vertex amount every optimal solution pays at least.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound(Vec<Weight>);

impl LowerBound {
    pub fn new(values: Vec<Weight>) -> Self {
        LowerBound(values)
    }

    pub fn get(&self, v: usize) -> Weight {
        self.0[v]
    }

    pub fn values(&self) -> &[Weight] {
        &self.0
    }

    /// Pointwise maximum; sound whenever both inputs are.
    pub fn max(&self, other: &LowerBound) -> LowerBound {
        LowerBound(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LbKind {
    Trivial,
    UniqueIn,
    #[default]
    Both,
}

impl LbKind {
    pub fn compute(self, instance: &Instance) -> LowerBound {
        match self {
            LbKind::Trivial => lb_trivial(instance),
            LbKind::UniqueIn | LbKind::Both => lb_unique_in_arc(instance),
        }
    }
}

impl FromStr for LbKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(LbKind::Trivial),
            "unique-in" => Ok(LbKind::UniqueIn),
            "both" => Ok(LbKind::Both),
            other => Err(format!("unknown lower bound `{other}` (expected trivial, unique-in or both)")),
        }
    }
}

impl fmt::Display for LbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LbKind::Trivial => "trivial",
            LbKind::UniqueIn => "unique-in",
            LbKind::Both => "both",
        })
    }
}

/// `ell(v) = min_{vu} w(vu)`; 0 for a vertex without out-arcs.
pub fn lb_trivial(instance: &Instance) -> LowerBound {
    LowerBound((0..instance.n()).map(|v| instance.min_out_weight(v).unwrap_or(0)).collect())
}

/// Raises the trivial bound at `u` to `w(uv)` whenever `uv` is the only arc entering `v`.
///
/// One pass; the result already dominates [`lb_trivial`], so it doubles as the
/// pointwise maximum of both bounds.
pub fn lb_unique_in_arc(instance: &Instance) -> LowerBound {
    let mut ell = lb_trivial(instance).0;
    for v in 0..instance.n() {
        if let [only] = instance.in_arcs(v) {
            let a = instance.arc(*only);
            ell[a.tail] = ell[a.tail].max(a.weight);
        }
    }
    LowerBound(ell)
}

/// `(V, A_ell)` with `A_ell = { vu : w(vu) <= ell(v) }`, its SCCs and the
/// per-vertex maximum obligatory weight.
#[derive(Debug, Clone)]
pub struct ObligatorySubgraph {
    arcs: Vec<ArcId>,
    mask: Vec<bool>,
    scc: SccIndex,
    obl_max: Vec<Weight>,
}

impl ObligatorySubgraph {
    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.mask[id]
    }

    pub fn scc(&self) -> &SccIndex {
        &self.scc
    }

    pub fn component_count(&self) -> usize {
        self.scc.count()
    }

    /// Heaviest obligatory arc leaving `v` (0 if none).
    pub fn obl_max(&self, v: usize) -> Weight {
        self.obl_max[v]
    }

    pub fn obl_max_all(&self) -> &[Weight] {
        &self.obl_max
    }
}

pub fn obligatory_subgraph(instance: &Instance, lb: &LowerBound) -> ObligatorySubgraph {
    let mut arcs = Vec::new();
    let mut mask = vec![false; instance.m()];
    let mut obl_max = vec![0; instance.n()];
    for (id, a) in instance.arcs().iter().enumerate() {
        if a.weight <= lb.get(a.tail) {
            arcs.push(id);
            mask[id] = true;
            obl_max[a.tail] = obl_max[a.tail].max(a.weight);
        }
    }
    let scc = SccIndex::of_mask(instance, &mask);
    ObligatorySubgraph { arcs, mask, scc, obl_max }
}
