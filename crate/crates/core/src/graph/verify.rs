use std::collections::HashSet;
use std::fmt;

use super::{total_cost, GraphError, Instance, SccIndex, Solution, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownArc { tail: usize, head: usize },
    RepeatedArc { tail: usize, head: usize },
    NotStronglyConnected { components: usize },
    MissingOutArc { vertex: usize },
    CostOverflow,
    CostMismatch { claimed: Weight, actual: Weight },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // ids are printed 1-based to match the file formats
        match self {
            Violation::UnknownArc { tail, head } => write!(f, "arc {} {} is not in the instance", tail + 1, head + 1),
            Violation::RepeatedArc { tail, head } => write!(f, "arc {} {} listed more than once", tail + 1, head + 1),
            Violation::NotStronglyConnected { components } => {
                write!(f, "not strongly connected ({components} components)")
            }
            Violation::MissingOutArc { vertex } => write!(f, "vertex {} has no outgoing arc", vertex + 1),
            Violation::CostOverflow => write!(f, "cost overflows 64 bits"),
            Violation::CostMismatch { claimed, actual } => {
                write!(f, "cost mismatch: claimed {claimed}, actual {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks arc membership, strong connectivity of the spanning subgraph and the
/// exact cost. Collects every violation instead of stopping at the first.
pub fn verify_solution(instance: &Instance, solution: &Solution) -> Verdict {
    let mut violations = Vec::new();
    let mut ids = Vec::with_capacity(solution.arcs.len());
    let mut seen = HashSet::new();
    for &(tail, head) in &solution.arcs {
        match instance.find_arc(tail, head) {
            Some(id) => {
                if seen.insert(id) {
                    ids.push(id);
                } else {
                    violations.push(Violation::RepeatedArc { tail, head });
                }
            }
            None => violations.push(Violation::UnknownArc { tail, head }),
        }
    }

    let scc = SccIndex::of_arcs(instance, &ids);
    if scc.count() > 1 {
        violations.push(Violation::NotStronglyConnected { components: scc.count() });
    }

    match total_cost(instance, &ids) {
        Ok(actual) if actual != solution.cost => {
            violations.push(Violation::CostMismatch { claimed: solution.cost, actual })
        }
        Ok(_) => {}
        Err(GraphError::MissingOutArc(v)) => {
            // report every such vertex
            let mut has_out = vec![false; instance.n()];
            for &id in &ids {
                has_out[instance.arc(id).tail] = true;
            }
            debug_assert!(!has_out[v]);
            for (vertex, ok) in has_out.into_iter().enumerate() {
                if !ok {
                    violations.push(Violation::MissingOutArc { vertex });
                }
            }
        }
        Err(_) => violations.push(Violation::CostOverflow),
    }
    Verdict { violations }
}
