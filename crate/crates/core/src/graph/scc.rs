use super::{ArcId, Instance};

/// Strongly connected components of a digraph.
///
/// Component ids are assigned in order of the smallest vertex they contain,
/// so vertex 0 always lies in component 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccIndex {
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl SccIndex {
    pub fn new(instance: &Instance) -> Self {
        Self::from_successors(instance.n(), |v| instance.out_arcs(v).iter().map(|&id| instance.arc(id).head))
    }

    pub fn of_arcs(instance: &Instance, ids: &[ArcId]) -> Self {
        Self::of_mask(instance, &instance.arc_mask(ids))
    }

    pub fn of_mask(instance: &Instance, mask: &[bool]) -> Self {
        Self::from_successors(instance.n(), |v| {
            instance.out_arcs(v).iter().filter(|&&id| mask[id]).map(|&id| instance.arc(id).head)
        })
    }

    /// Iterative Tarjan over an arbitrary successor function.
    pub fn from_successors<F, I>(n: usize, successors: F) -> Self
    where
        F: Fn(usize) -> I,
        I: Iterator<Item = usize>,
    {
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut raw_comp = vec![UNSEEN; n];
        let mut raw_count = 0usize;
        let mut next = 0usize;
        let mut call: Vec<(usize, I)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((root, successors(root)));

            while let Some((v, iter)) = call.last_mut() {
                let v = *v;
                if let Some(u) = iter.next() {
                    if index[u] == UNSEEN {
                        index[u] = next;
                        low[u] = next;
                        next += 1;
                        stack.push(u);
                        on_stack[u] = true;
                        call.push((u, successors(u)));
                    } else if on_stack[u] {
                        low[v] = low[v].min(index[u]);
                    }
                    continue;
                }
                call.pop();
                if let Some((parent, _)) = call.last() {
                    let p = *parent;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack holds v");
                        on_stack[w] = false;
                        raw_comp[w] = raw_count;
                        if w == v {
                            break;
                        }
                    }
                    raw_count += 1;
                }
            }
        }

        let mut renumber = vec![UNSEEN; raw_count];
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut component_of = vec![0usize; n];
        for v in 0..n {
            let r = raw_comp[v];
            if renumber[r] == UNSEEN {
                renumber[r] = components.len();
                components.push(Vec::new());
            }
            component_of[v] = renumber[r];
            components[renumber[r]].push(v);
        }
        SccIndex { component_of, components }
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.component_of
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_shapes() {
        let cycle = Instance::from_triples(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert_eq!(SccIndex::new(&cycle).count(), 1);

        let joined = Instance::from_triples(4, &[(0, 1, 0), (1, 0, 0), (2, 3, 0), (3, 2, 0), (1, 2, 0)]).unwrap();
        let scc = SccIndex::new(&joined);
        assert_eq!(scc.count(), 2);
        assert_eq!(scc.components(), &[vec![0, 1], vec![2, 3]]);

        let dag = Instance::from_triples(4, &[(0, 1, 0), (1, 2, 0), (0, 3, 0), (3, 2, 0)]).unwrap();
        assert_eq!(SccIndex::new(&dag).count(), 4);
    }

    fn reach(n: usize, adj: &[Vec<usize>], s: usize) -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut st = vec![s];
        seen[s] = true;
        while let Some(v) = st.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    st.push(u);
                }
            }
        }
        seen
    }

    proptest! {
        #[test]
        fn matches_mutual_reachability(n in 1usize..9, edges in proptest::collection::vec((0usize..9, 0usize..9), 0..30)) {
            let mut adj = vec![Vec::new(); n];
            for (a, b) in edges {
                let (a, b) = (a % n, b % n);
                if a != b && !adj[a].contains(&b) {
                    adj[a].push(b);
                }
            }
            let scc = SccIndex::from_successors(n, |v| adj[v].clone().into_iter());
            let r: Vec<Vec<bool>> = (0..n).map(|s| reach(n, &adj, s)).collect();
            for u in 0..n {
                for v in 0..n {
                    let mutual = r[u][v] && r[v][u];
                    prop_assert_eq!(mutual, scc.component_of(u) == scc.component_of(v));
                }
            }
            // condensation is acyclic: no two components reach each other
            for u in 0..n {
                for &v in &adj[u] {
                    let (cu, cv) = (scc.component_of(u), scc.component_of(v));
                    if cu != cv {
                        prop_assert!(!(r[v][u]));
                    }
                }
            }
            let total: usize = scc.components().iter().map(|c| c.len()).sum();
            prop_assert_eq!(total, n);
        }
    }
}
