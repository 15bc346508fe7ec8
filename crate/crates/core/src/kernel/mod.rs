//! Data reduction with solution lifting.
//!
//! A kernelization returns a smaller instance and a [`KernelJournal`] such
//! that `opt(original) = opt(kernel) + offset`. The journal alone, together
//! with the original instance, is enough to rebuild the kernel
//! ([`replay`]) and to map kernel solutions back ([`lift_solution`]).

mod cycle;
mod fes;
mod gadget;
mod vc;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

pub use cycle::solve_cycle;
pub use fes::{
    kernelize_fes, path_census, preprocess_linear, rule2_normalize, rule3_degree1, rule4_replace_paths, PathCensus,
};
pub use gadget::{gadget_weights, PathGadget};
pub use vc::{build_partition, kernelize_vc, vertex_cover_2approx, CoverPartition, VcConfig};

use crate::graph::{verify_solution, ArcId, GraphError, Instance, Solution, Weight, MAX_WEIGHT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("instance is not strongly connected")]
    NotStronglyConnected,
    #[error("underlying graph is not a cycle")]
    NotACycle,
    #[error("underlying graph is a cycle")]
    UnexpectedCycle,
    #[error("vertex {} does not have exactly one neighbour", .0 + 1)]
    NotPendant(usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("kernel solution rejected: {0}")]
    InvalidKernelSolution(String),
    #[error("journal does not match the instance: {0}")]
    JournalMismatch(String),
    #[error("lifted solution is infeasible: {0}")]
    LiftFailed(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One applied reduction, in the vertex ids of the instance the journal
/// starts from. Gadget vertices are named by their kernel ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    /// Every out-arc of `v` lost `delta`.
    Normalize {
        v: usize,
        delta: Weight,
    },
    /// Pendant `v` with sole neighbour `u` removed; weights at removal time.
    Pendant {
        v: usize,
        u: usize,
        wvu: Weight,
        wuv: Weight,
    },
    Path(PathRecord),
    /// Twin `u` of `survivor` removed; its incident arcs at removal time.
    Twin {
        u: usize,
        survivor: usize,
        arcs: Vec<(usize, usize, Weight)>,
    },
    /// The reduced instance is a cycle and was left for [`solve_cycle`].
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRecord {
    /// `v_0, ..., v_{h+1}`
    pub path: Vec<usize>,
    /// `w(v_i v_{i+1})` for `i = 1..h-1`; `None` if the arc is missing.
    pub forward: Vec<Option<Weight>>,
    pub backward: Vec<Option<Weight>>,
    /// 0-based index into `forward` of the dropped pair.
    pub k: usize,
    /// Kernel ids of `a1, a2, b1, b2`.
    pub gadget: [usize; 4],
}

impl PathRecord {
    /// Number of inner vertices `h`.
    pub fn inner(&self) -> usize {
        self.path.len() - 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KernelJournal {
    pub records: Vec<Record>,
    /// `d`
    pub offset: Weight,
}

impl KernelJournal {
    pub fn is_cycle(&self) -> bool {
        self.records.iter().any(|r| matches!(r, Record::Cycle))
    }

    /// Recomputes `d` from the records.
    pub fn record_sum(&self) -> Option<Weight> {
        let mut d: Weight = 0;
        for r in &self.records {
            let add = match r {
                Record::Normalize { delta, .. } => *delta,
                Record::Pendant { wvu, wuv, .. } => wvu.checked_add(*wuv)?,
                Record::Twin { u, arcs, .. } => arcs.iter().filter(|a| a.0 == *u).map(|a| a.2).min().unwrap_or(0),
                Record::Path(_) | Record::Cycle => 0,
            };
            d = d.checked_add(add)?;
        }
        Some(d)
    }
}

/// Kernel rebuilt from a journal. Internal ids ("extended") number the
/// original vertices first and then four ids per path record.
#[derive(Debug, Clone)]
pub struct Replay {
    pub kernel: Instance,
    /// extended id of every kernel vertex
    pub kernel_to_ext: Vec<usize>,
    pub original_n: usize,
}

struct Work<'a> {
    g: &'a Instance,
    alive: Vec<bool>,
    /// accumulated subtraction from each vertex's out-weights
    shift: Vec<Weight>,
    extra: Vec<(usize, usize, Weight)>,
}

impl Work<'_> {
    fn current(&self, id: ArcId) -> Weight {
        let a = self.g.arc(id);
        a.weight.saturating_sub(self.shift[a.tail])
    }

    fn arc_between(&self, tail: usize, head: usize) -> Option<ArcId> {
        // scan the shorter list
        if self.g.out_degree(tail) <= self.g.in_degree(head) {
            self.g.out_arcs(tail).iter().copied().find(|&id| self.g.arc(id).head == head)
        } else {
            self.g.in_arcs(head).iter().copied().find(|&id| self.g.arc(id).tail == tail)
        }
    }

    fn weight(&self, tail: usize, head: usize) -> Option<Weight> {
        self.arc_between(tail, head).map(|id| self.current(id))
    }

    fn incident(&self, u: usize) -> Vec<(usize, usize, Weight)> {
        let outs = self.g.out_arcs(u).iter().filter(|&&id| self.alive[self.g.arc(id).head]);
        let ins = self.g.in_arcs(u).iter().filter(|&&id| self.alive[self.g.arc(id).tail]);
        outs.chain(ins)
            .map(|&id| {
                let a = self.g.arc(id);
                (a.tail, a.head, self.current(id))
            })
            .collect()
    }
}

fn mismatch(msg: String) -> KernelError {
    KernelError::JournalMismatch(msg)
}

/// Applies the journal to `original` and returns the kernel, checking every
/// recorded weight and the offset along the way.
pub fn replay(original: &Instance, journal: &KernelJournal) -> Result<Replay, KernelError> {
    let n = original.n();
    let mut w = Work { g: original, alive: vec![true; n], shift: vec![0; n], extra: Vec::new() };
    let mut d: Weight = 0;
    let mut paths = 0usize;
    let live = |w: &Work, v: usize| -> Result<(), KernelError> {
        if v < n && w.alive[v] {
            Ok(())
        } else {
            Err(mismatch(format!("vertex {} is not present", v + 1)))
        }
    };

    for r in &journal.records {
        match r {
            Record::Normalize { v, delta } => {
                live(&w, *v)?;
                w.shift[*v] = w.shift[*v].checked_add(*delta).ok_or(KernelError::Overflow)?;
                d = d.checked_add(*delta).ok_or(KernelError::Overflow)?;
            }
            Record::Pendant { v, u, wvu, wuv } => {
                live(&w, *v)?;
                live(&w, *u)?;
                if w.weight(*v, *u) != Some(*wvu) || w.weight(*u, *v) != Some(*wuv) {
                    return Err(mismatch(format!("weights between {} and {}", v + 1, u + 1)));
                }
                w.alive[*v] = false;
                w.shift[*u] = w.shift[*u].checked_add(*wuv).ok_or(KernelError::Overflow)?;
                d = wvu.checked_add(*wuv).and_then(|x| d.checked_add(x)).ok_or(KernelError::Overflow)?;
            }
            Record::Path(p) => {
                let h = p.inner();
                if h < 2 || p.forward.len() != h - 1 || p.backward.len() != h - 1 {
                    return Err(mismatch("malformed path record".into()));
                }
                for &v in &p.path {
                    live(&w, v)?;
                }
                for i in 1..h {
                    let (a, b) = (p.path[i], p.path[i + 1]);
                    if w.weight(a, b) != p.forward[i - 1] || w.weight(b, a) != p.backward[i - 1] {
                        return Err(mismatch(format!("path weights between {} and {}", a + 1, b + 1)));
                    }
                }
                let gadget = gadget_weights(&p.forward, &p.backward);
                if gadget.k != p.k {
                    return Err(mismatch("path record has the wrong dropped pair".into()));
                }
                for &v in &p.path[2..h] {
                    w.alive[v] = false;
                }
                let base = n + 4 * paths;
                paths += 1;
                w.alive.extend([true; 4]);
                w.shift.extend([0; 4]);
                let (v1, vh) = (p.path[1], p.path[h]);
                let (a1, a2, b1, b2) = (base, base + 1, base + 2, base + 3);
                let arcs = [
                    (v1, a1, Some(0)),
                    (a1, v1, Some(0)),
                    (vh, a2, Some(0)),
                    (a2, vh, Some(0)),
                    (a1, b1, gadget.a1b1),
                    (a2, b2, gadget.a2b2),
                    (b1, a2, Some(0)),
                    (b2, a1, Some(0)),
                    (a1, b2, gadget.a1b2),
                    (a2, b1, gadget.a2b1),
                ];
                for (t, hd, wt) in arcs {
                    if let Some(wt) = wt {
                        if wt > MAX_WEIGHT as u128 {
                            return Err(KernelError::Overflow);
                        }
                        w.extra.push((t, hd, wt as Weight));
                    }
                }
            }
            Record::Twin { u, survivor, arcs } => {
                live(&w, *u)?;
                live(&w, *survivor)?;
                if u == survivor || w.incident(*u) != *arcs {
                    return Err(mismatch(format!("arcs of vertex {}", u + 1)));
                }
                let pay = arcs.iter().filter(|a| a.0 == *u).map(|a| a.2).min().unwrap_or(0);
                w.alive[*u] = false;
                d = d.checked_add(pay).ok_or(KernelError::Overflow)?;
            }
            Record::Cycle => {}
        }
    }
    if d != journal.offset {
        return Err(mismatch(format!("offset {} but records sum to {d}", journal.offset)));
    }

    let total = w.alive.len();
    let mut ext_to_kernel = vec![usize::MAX; total];
    let mut kernel_to_ext = Vec::new();
    for v in 0..total {
        if w.alive[v] {
            ext_to_kernel[v] = kernel_to_ext.len();
            kernel_to_ext.push(v);
        }
    }
    let mut triples = Vec::new();
    for (id, a) in original.arcs().iter().enumerate() {
        if w.alive[a.tail] && w.alive[a.head] {
            triples.push((ext_to_kernel[a.tail], ext_to_kernel[a.head], w.current(id)));
        }
    }
    for &(t, h, wt) in &w.extra {
        if w.alive[t] && w.alive[h] {
            triples.push((ext_to_kernel[t], ext_to_kernel[h], wt.saturating_sub(w.shift[t])));
        }
    }
    let kernel = Instance::from_triples(kernel_to_ext.len(), &triples)?;

    let mut j = 0;
    for r in &journal.records {
        if let Record::Path(p) = r {
            let expect: Vec<usize> = (0..4).map(|i| ext_to_kernel[n + 4 * j + i]).collect();
            if expect != p.gadget {
                return Err(mismatch("gadget ids do not follow the kernel numbering".into()));
            }
            j += 1;
        }
    }
    Ok(Replay { kernel, kernel_to_ext, original_n: n })
}

/// Maps a solution of the kernel back to `original`.
///
/// The kernel is rebuilt from the journal and the solution is checked against
/// it first. The result has cost at most `kernel cost + offset`, with equality
/// for optimal kernel solutions.
pub fn lift_solution(
    original: &Instance,
    journal: &KernelJournal,
    kernel_solution: &Solution,
) -> Result<Solution, KernelError> {
    let rep = replay(original, journal)?;
    let verdict = verify_solution(&rep.kernel, kernel_solution);
    if !verdict.is_ok() {
        let msg: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        return Err(KernelError::InvalidKernelSolution(msg.join("; ")));
    }
    let n = original.n();
    let mut arcs: HashSet<(usize, usize)> =
        kernel_solution.arcs.iter().map(|&(t, h)| (rep.kernel_to_ext[t], rep.kernel_to_ext[h])).collect();

    let paths = journal.records.iter().filter(|r| matches!(r, Record::Path(_))).count();
    let mut j = paths;
    for r in journal.records.iter().rev() {
        match r {
            Record::Normalize { .. } | Record::Cycle => {}
            Record::Pendant { v, u, .. } => {
                arcs.insert((*v, *u));
                arcs.insert((*u, *v));
            }
            Record::Path(p) => {
                j -= 1;
                let base = n + 4 * j;
                let (a1, a2, b1, b2) = (base, base + 1, base + 2, base + 3);
                let h = p.inner();
                let (v1, vh) = (p.path[1], p.path[h]);
                let fwd = [(v1, a1), (a1, b1), (b1, a2), (a2, vh)].iter().all(|x| arcs.contains(x));
                let bwd = [(vh, a2), (a2, b2), (b2, a1), (a1, v1)].iter().all(|x| arcs.contains(x));
                for x in
                    [(v1, a1), (a1, v1), (vh, a2), (a2, vh), (a1, b1), (a2, b2), (b1, a2), (b2, a1), (a1, b2), (a2, b1)]
                {
                    arcs.remove(&x);
                }
                for i in 1..h {
                    let (a, b) = (p.path[i], p.path[i + 1]);
                    let keep_pair = fwd || bwd || i - 1 != p.k;
                    if (fwd || !bwd) && keep_pair {
                        arcs.insert((a, b));
                    }
                    if (bwd || !fwd) && keep_pair {
                        arcs.insert((b, a));
                    }
                }
            }
            Record::Twin { u, survivor, arcs: incident } => {
                let out = incident
                    .iter()
                    .filter(|a| a.0 == *u)
                    .min_by_key(|a| a.2)
                    .ok_or_else(|| mismatch(format!("vertex {} has no out-arc", u + 1)))?;
                let feeder = arcs
                    .iter()
                    .filter(|a| a.1 == *survivor)
                    .map(|a| a.0)
                    .min()
                    .ok_or_else(|| KernelError::LiftFailed(format!("vertex {} has no in-arc", survivor + 1)))?;
                if !incident.iter().any(|a| a.0 == feeder && a.1 == *u) {
                    return Err(KernelError::LiftFailed(format!("{} and {} are not twins", u + 1, survivor + 1)));
                }
                arcs.insert((*u, out.1));
                arcs.insert((feeder, *u));
            }
        }
    }

    let index: HashMap<(usize, usize), ArcId> =
        original.arcs().iter().enumerate().map(|(id, a)| ((a.tail, a.head), id)).collect();
    let ids =
        arcs.iter()
            .map(|x| {
                index.get(x).copied().ok_or_else(|| {
                    KernelError::LiftFailed(format!("arc {} {} is not in the instance", x.0 + 1, x.1 + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
    if !original.is_strongly_connected_arcs(&ids) {
        return Err(KernelError::LiftFailed("not strongly connected".into()));
    }
    Ok(Solution::from_arc_ids(original, &ids)?)
}

/// Lifts a solution of a feedback-edge kernel.
pub fn lift_solution_fes(
    original: &Instance,
    journal: &KernelJournal,
    kernel_solution: &Solution,
) -> Result<Solution, KernelError> {
    lift_solution(original, journal, kernel_solution)
}

/// Lifts a solution of a vertex-cover kernel.
pub fn lift_solution_vc(
    original: &Instance,
    journal: &KernelJournal,
    kernel_solution: &Solution,
) -> Result<Solution, KernelError> {
    lift_solution(original, journal, kernel_solution)
}
