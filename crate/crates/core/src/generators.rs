//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`, consumed
//! only through [`Rng::next_u64`]. Bounded integers use rejection sampling on
//! the smallest covering power of two, and probabilities compare the top 53
//! bits against `p`, so every instance is a pure function of its parameters.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::graph::{Instance, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("element {0} is in no set")]
    UncoverableElement(usize),
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} mentions element {element} outside the universe")]
    ElementOutOfRange { set: usize, element: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let mask = if n == 1 { 0 } else { u64::MAX >> (n - 1).leading_zeros() };
        loop {
            let x = self.next_u64() & mask;
            if x < n {
                return x;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        match (hi - lo).checked_add(1) {
            Some(span) => lo + self.below(span),
            None => self.next_u64(),
        }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        let x = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        x < p
    }

    /// Fisher-Yates, last position first.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Reduction from Set Cover. Vertices: `s = 0`, `t = 1`, element `u` at
/// `2 + u`, set `i` at `2 + universe + i`. Elements are 0-based.
/// Returns the instance and the budget `ell`.
pub fn gen_setcover(universe: usize, sets: &[Vec<usize>], ell: usize) -> Result<(Instance, usize), GenError> {
    let mut covered = vec![false; universe];
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(GenError::EmptySet(i));
        }
        for &e in set {
            if e >= universe {
                return Err(GenError::ElementOutOfRange { set: i, element: e });
            }
            covered[e] = true;
        }
    }
    if let Some(e) = covered.iter().position(|&c| !c) {
        return Err(GenError::UncoverableElement(e));
    }

    let (s, t) = (0, 1);
    let elem = |u: usize| 2 + u;
    let set_v = |i: usize| 2 + universe + i;
    let mut arcs: Vec<(usize, usize, Weight)> = vec![(t, s, 0)];
    arcs.extend((0..sets.len()).map(|i| (s, set_v(i), 0)));
    arcs.extend((0..sets.len()).map(|i| (set_v(i), t, 0)));
    arcs.extend((0..universe).map(|u| (elem(u), t, 0)));
    for (i, set) in sets.iter().enumerate() {
        let mut members = set.clone();
        members.sort_unstable();
        members.dedup();
        arcs.extend(members.into_iter().map(|u| (set_v(i), elem(u), 1)));
    }
    let instance = Instance::from_triples(2 + universe + sets.len(), &arcs)
        .map_err(|e| GenError::InvalidParameters(e.to_string()))?;
    Ok((instance, ell))
}

/// Bidirectional grid of weight-1 arcs, `r * cols + c` numbering. When
/// `heavy >= 2`, up to five seeded column cuts reweight the horizontal arcs
/// crossing them uniformly in `[2, heavy]`, so the weight-1 strips form at
/// most six obligatory components.
pub fn gen_grid(rows: usize, cols: usize, heavy: Weight, seed: u64) -> Result<Instance, GenError> {
    if rows.saturating_mul(cols) < 2 {
        return Err(GenError::InvalidParameters("grid needs at least two cells".into()));
    }
    let mut rng = Rng::new(seed);
    let mut cut = vec![false; cols];
    if heavy >= 2 && cols >= 2 {
        let mut candidates: Vec<usize> = (1..cols).collect();
        rng.shuffle(&mut candidates);
        for &c in candidates.iter().take(5) {
            cut[c] = true;
        }
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut arcs = Vec::with_capacity(4 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                let (a, b) = if cut[c + 1] { (rng.range(2, heavy), rng.range(2, heavy)) } else { (1, 1) };
                arcs.push((id(r, c), id(r, c + 1), a));
                arcs.push((id(r, c + 1), id(r, c), b));
            }
            if r + 1 < rows {
                arcs.push((id(r, c), id(r + 1, c), 1));
                arcs.push((id(r + 1, c), id(r, c), 1));
            }
        }
    }
    Instance::from_triples(rows * cols, &arcs).map_err(|e| GenError::InvalidParameters(e.to_string()))
}

/// Random recursive tree realised as antiparallel arc pairs, plus `g`
/// single-direction arcs between pairs that are not adjacent in the
/// underlying graph. The feedback edge number of the result is exactly `g`.
pub fn gen_random_fes(n: usize, g: usize, max_weight: Weight, seed: u64) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(GenError::InvalidParameters("need at least two vertices".into()));
    }
    let free = (n * (n - 1) / 2).saturating_sub(n - 1);
    if g > free {
        return Err(GenError::InvalidParameters(format!("{g} extra edges do not fit on {n} vertices")));
    }
    let mut rng = Rng::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n + g);
    let mut arcs = Vec::with_capacity(2 * (n - 1) + g);
    for i in 1..n {
        let v = order[i];
        let p = order[rng.below(i as u64) as usize];
        edges.insert((v.min(p), v.max(p)));
        arcs.push((p, v, rng.range(0, max_weight)));
        arcs.push((v, p, rng.range(0, max_weight)));
    }
    let mut added = 0;
    while added < g {
        let a = rng.below(n as u64) as usize;
        let b = rng.below(n as u64) as usize;
        if a == b || !edges.insert((a.min(b), a.max(b))) {
            continue;
        }
        arcs.push((a, b, rng.range(0, max_weight)));
        added += 1;
    }
    Instance::from_triples(n, &arcs).map_err(|e| GenError::InvalidParameters(e.to_string()))
}

/// Random Hamiltonian cycle plus every other ordered pair independently with probability `p`.
pub fn gen_random_sc(n: usize, p: f64, max_weight: Weight, seed: u64) -> Result<Instance, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameters("need at least one vertex".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidParameters(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = Rng::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut next = vec![usize::MAX; n];
    let mut arcs = Vec::new();
    if n >= 2 {
        for i in 0..n {
            let (a, b) = (order[i], order[(i + 1) % n]);
            next[a] = b;
            arcs.push((a, b, rng.range(0, max_weight)));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && next[a] != b && rng.chance(p) {
                arcs.push((a, b, rng.range(0, max_weight)));
            }
        }
    }
    Instance::from_triples(n, &arcs).map_err(|e| GenError::InvalidParameters(e.to_string()))
}
