use super::Instance;

/// The underlying undirected simple graph: antiparallel arcs merge into one edge.
#[derive(Debug, Clone)]
pub struct UndirectedView {
    start: Vec<usize>,
    neighbors: Vec<usize>,
}

impl UndirectedView {
    pub fn new(instance: &Instance) -> Self {
        let n = instance.n();
        let mut start = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(2 * instance.m());
        let mut marker = vec![usize::MAX; n];
        start.push(0);
        for v in 0..n {
            let from = neighbors.len();
            let outs = instance.out_arcs(v).iter().map(|&id| instance.arc(id).head);
            let ins = instance.in_arcs(v).iter().map(|&id| instance.arc(id).tail);
            for u in outs.chain(ins) {
                if marker[u] != v {
                    marker[u] = v;
                    neighbors.push(u);
                }
            }
            neighbors[from..].sort_unstable();
            start.push(neighbors.len());
        }
        UndirectedView { start, neighbors }
    }

    pub fn n(&self) -> usize {
        self.start.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.start[v]..self.start[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.start[v + 1] - self.start[v]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn connected_components(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    /// True iff the graph is a single simple cycle (connected, every degree 2, n >= 3).
    pub fn is_cycle(&self) -> bool {
        let n = self.n();
        n >= 3 && (0..n).all(|v| self.degree(v) == 2) && self.connected_components() == 1
    }
}

/// Feedback edge number of the underlying undirected graph: `|E| - n + #components`.
pub fn feedback_edge_number(instance: &Instance) -> usize {
    let view = UndirectedView::new(instance);
    view.edge_count() + view.connected_components() - view.n()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bidirectional(n: usize, edges: &[(usize, usize)]) -> Instance {
        let mut t = Vec::new();
        for &(a, b) in edges {
            t.push((a, b, 1));
            t.push((b, a, 1));
        }
        Instance::from_triples(n, &t).unwrap()
    }

    #[test]
    fn feedback_edge_numbers() {
        let path = bidirectional(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(feedback_edge_number(&path), 0);

        let directed_cycle =
            Instance::from_triples(6, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 0, 1)]).unwrap();
        assert_eq!(feedback_edge_number(&directed_cycle), 1);

        let mut t: Vec<(usize, usize, u64)> = Vec::new();
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            t.push((a, b, 1));
            t.push((b, a, 1));
        }
        t.push((0, 2, 1));
        let chord = Instance::from_triples(4, &t).unwrap();
        assert_eq!(feedback_edge_number(&chord), 2);
    }

    #[test]
    fn neighbors_are_merged_and_sorted() {
        let g = Instance::from_triples(3, &[(0, 2, 1), (2, 0, 1), (1, 0, 1)]).unwrap();
        let v = UndirectedView::new(&g);
        assert_eq!(v.neighbors(0), &[1, 2]);
        assert_eq!(v.edge_count(), 2);
        assert!(!v.is_cycle());
        let c = Instance::from_triples(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(UndirectedView::new(&c).is_cycle());
    }
}
