use std::collections::HashMap;

use super::{replay, KernelError, KernelJournal, Record};
use crate::graph::{Instance, UndirectedView, Weight};

/// Endpoints of a greedy maximal matching of the underlying graph, scanning
/// vertices and neighbours in ascending order. Sorted.
pub fn vertex_cover_2approx(instance: &Instance) -> Vec<usize> {
    let view = UndirectedView::new(instance);
    let mut matched = vec![false; instance.n()];
    for v in 0..instance.n() {
        if matched[v] {
            continue;
        }
        if let Some(&u) = view.neighbors(v).iter().find(|&&u| !matched[u]) {
            matched[v] = true;
            matched[u] = true;
        }
    }
    (0..instance.n()).filter(|&v| matched[v]).collect()
}

/// Vertices outside the cover grouped by their weighted arcs to and from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPartition {
    pub cover: Vec<usize>,
    /// Distinct weights of the instance, ascending.
    pub levels: Vec<Weight>,
    /// Per vertex outside the cover: for each cover vertex `x_i`, the level
    /// index of `w(u x_i)` followed by those of `w(x_i u)`; `levels.len()`
    /// marks a missing arc.
    pub signatures: Vec<Option<Vec<u32>>>,
    /// Classes in order of their smallest member; members ascending.
    pub classes: Vec<Vec<usize>>,
}

impl CoverPartition {
    pub fn x(&self) -> usize {
        self.cover.len()
    }

    pub fn q(&self) -> usize {
        self.levels.len()
    }

    /// `(q + 1)^(2x) + x`, saturating.
    pub fn size_bound(&self) -> usize {
        let exp = u32::try_from(2 * self.x()).unwrap_or(u32::MAX);
        (self.q() + 1).saturating_pow(exp).saturating_add(self.x())
    }
}

pub fn build_partition(instance: &Instance, cover: &[usize]) -> Result<CoverPartition, KernelError> {
    let n = instance.n();
    let mut pos = vec![usize::MAX; n];
    let mut sorted = cover.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, &v) in sorted.iter().enumerate() {
        if v >= n {
            return Err(KernelError::InvalidCover(format!("vertex {} out of range", v + 1)));
        }
        pos[v] = i;
    }
    for a in instance.arcs() {
        if pos[a.tail] == usize::MAX && pos[a.head] == usize::MAX {
            return Err(KernelError::InvalidCover(format!("arc {} {} is not covered", a.tail + 1, a.head + 1)));
        }
    }
    let mut levels: Vec<Weight> = instance.arcs().iter().map(|a| a.weight).collect();
    levels.sort_unstable();
    levels.dedup();
    let level = |w: Weight| levels.binary_search(&w).expect("weight is a level") as u32;
    let x = sorted.len();
    let missing = levels.len() as u32;

    let mut signatures = vec![None; n];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        if pos[u] != usize::MAX {
            continue;
        }
        let mut sig = vec![missing; 2 * x];
        for &id in instance.out_arcs(u) {
            let a = instance.arc(id);
            sig[pos[a.head]] = level(a.weight);
        }
        for &id in instance.in_arcs(u) {
            let a = instance.arc(id);
            sig[x + pos[a.tail]] = level(a.weight);
        }
        let class = *index.entry(sig.clone()).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[class].push(u);
        signatures[u] = Some(sig);
    }
    Ok(CoverPartition { cover: sorted, levels, signatures, classes })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VcConfig {
    /// Return the input unchanged when it already has at most
    /// `(q + 1)^(2x) + x` vertices, instead of removing every twin.
    pub size_guard: bool,
}

/// Keeps one vertex per partition class. Each removed twin pays its minimum
/// out-weight into the offset. Without a cover, a maximal-matching cover is used.
pub fn kernelize_vc(
    instance: &Instance,
    cover: Option<&[usize]>,
    config: VcConfig,
) -> Result<(Instance, KernelJournal, CoverPartition), KernelError> {
    if !instance.is_strongly_connected() {
        return Err(KernelError::NotStronglyConnected);
    }
    let cover = match cover {
        Some(c) => c.to_vec(),
        None => vertex_cover_2approx(instance),
    };
    let partition = build_partition(instance, &cover)?;
    let mut journal = KernelJournal::default();
    if config.size_guard && instance.n() <= partition.size_bound() {
        return Ok((instance.clone(), journal, partition));
    }
    for class in &partition.classes {
        let survivor = class[0];
        for &u in &class[1..] {
            let outs = instance.out_arcs(u).iter().map(|&id| instance.arc(id));
            let ins = instance.in_arcs(u).iter().map(|&id| instance.arc(id));
            let arcs: Vec<(usize, usize, Weight)> = outs.chain(ins).map(|a| (a.tail, a.head, a.weight)).collect();
            journal.records.push(Record::Twin { u, survivor, arcs });
        }
    }
    journal.offset = journal.record_sum().ok_or(KernelError::Overflow)?;
    let kernel = replay(instance, &journal)?.kernel;
    Ok((kernel, journal, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::kernel::lift_solution;
    use crate::oracle::{oracle_solve, DEFAULT_CAP};

    fn star(leaves: usize) -> Instance {
        let mut t = Vec::new();
        for l in 1..=leaves {
            t.push((0, l, 1));
            t.push((l, 0, 1));
        }
        Instance::from_triples(leaves + 1, &t).unwrap()
    }

    #[test]
    fn covers() {
        assert_eq!(vertex_cover_2approx(&star(4)), vec![0, 1]);
        let e = Instance::from_triples(2, &[(0, 1, 0), (1, 0, 0)]).unwrap();
        assert_eq!(vertex_cover_2approx(&e), vec![0, 1]);
        assert!(vertex_cover_2approx(&Instance::from_triples(1, &[]).unwrap()).is_empty());
    }

    #[test]
    fn star_with_twins() {
        let g = star(4);
        let (k, j, p) = kernelize_vc(&g, Some(&[0]), VcConfig::default()).unwrap();
        assert_eq!((p.x(), p.q()), (1, 1));
        assert_eq!(k.n(), 2);
        assert_eq!(j.offset, 3);
        let kopt = oracle_solve(&k, DEFAULT_CAP, Exec::Sequential).unwrap();
        assert_eq!(kopt.cost, 2);
        let lifted = lift_solution(&g, &j, &kopt).unwrap();
        assert_eq!(lifted.cost, 5);
        assert_eq!(oracle_solve(&g, DEFAULT_CAP, Exec::Sequential).unwrap().cost, 5);
    }

    #[test]
    fn size_guard_keeps_small_inputs() {
        let g = star(4);
        let (k, j, _) = kernelize_vc(&g, Some(&[0]), VcConfig { size_guard: true }).unwrap();
        assert_eq!(k, g);
        assert_eq!(j.offset, 0);
    }

    #[test]
    fn classes_split_on_weights_and_missing_arcs() {
        let t = [(1, 0, 1), (0, 1, 1), (2, 0, 1), (0, 2, 1), (3, 0, 2), (0, 3, 1), (4, 0, 1)];
        let mut t = t.to_vec();
        t.push((5, 4, 0));
        t.push((4, 5, 0));
        t.push((5, 0, 3));
        t.push((0, 5, 3));
        let g = Instance::from_triples(6, &t).unwrap();
        let p = build_partition(&g, &[0, 5]).unwrap();
        assert_eq!(p.classes, vec![vec![1, 2], vec![3], vec![4]]);
        assert!(matches!(build_partition(&g, &[0]), Err(KernelError::InvalidCover(_))));
    }
}
