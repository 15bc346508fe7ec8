use crate::graph::Weight;

/// Six-vertex replacement for the inner vertices of a long induced path.
///
/// `None` stands for an infinite value: a missing arc on the path makes the
/// corresponding sum infinite, and infinite gadget arcs are left out of the
/// kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathGadget {
    pub c_r: Option<u128>,
    pub c_l: Option<u128>,
    pub c_n: Option<u128>,
    /// 0-based index of the inner pair with the largest weight sum.
    pub k: usize,
    pub a1b1: Option<u128>,
    pub a2b2: Option<u128>,
    pub a1b2: Option<u128>,
    pub a2b1: Option<u128>,
}

/// `a <= b` with `None` as infinity.
pub(crate) fn le_inf(a: Option<u128>, b: Option<u128>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn add_inf(a: Option<u128>, b: Option<u128>) -> Option<u128> {
    Some(a? + b?)
}

/// Gadget weights for inner pairs `(v_i, v_{i+1})`, `i = 1..h-1`.
/// `forward[i]` is `w(v_i v_{i+1})`, `backward[i]` is `w(v_{i+1} v_i)`.
pub fn gadget_weights(forward: &[Option<Weight>], backward: &[Option<Weight>]) -> PathGadget {
    assert_eq!(forward.len(), backward.len());
    assert!(!forward.is_empty(), "a path needs at least one inner pair");
    let wide = |w: &Option<Weight>| w.map(u128::from);
    let c_r = forward.iter().map(wide).try_fold(0u128, |acc, w| Some(acc + w?));
    let c_l = backward.iter().map(wide).try_fold(0u128, |acc, w| Some(acc + w?));

    let pair = |i: usize| add_inf(wide(&forward[i]), wide(&backward[i]));
    let mut k = 0;
    for i in 1..forward.len() {
        // strictly larger only, so the first maximum wins
        if !le_inf(pair(i), pair(k)) {
            k = i;
        }
    }
    let c_n = (0..forward.len()).filter(|&i| i != k).try_fold(0u128, |acc, i| Some(acc + pair(i)?));

    let (a1b2, a2b1) = if le_inf(c_r, c_n) || le_inf(c_l, c_n) {
        (c_r, c_l)
    } else {
        let n = c_n.expect("finite when both directions exceed it");
        (Some(n.div_ceil(2)), Some(n / 2))
    };
    PathGadget { c_r, c_l, c_n, k, a1b1: c_r, a2b2: c_l, a1b2, a2b1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn some(v: &[u64]) -> Vec<Option<Weight>> {
        v.iter().map(|&w| Some(w)).collect()
    }

    #[test]
    fn one_direction_cheap() {
        let g = gadget_weights(&some(&[1; 6]), &some(&[0; 6]));
        assert_eq!((g.c_r, g.c_l, g.c_n, g.k), (Some(6), Some(0), Some(5), 0));
        assert_eq!((g.a1b1, g.a2b2, g.a1b2, g.a2b1), (Some(6), Some(0), Some(6), Some(0)));
    }

    #[test]
    fn split_branch() {
        // pair sums 12, 3, 2, 2: k = 0 and C_N = 7, below both directions
        let g = gadget_weights(&some(&[6, 2, 1, 1]), &some(&[6, 1, 1, 1]));
        assert_eq!((g.c_r, g.c_l, g.c_n, g.k), (Some(10), Some(9), Some(7), 0));
        assert_eq!((g.a1b2, g.a2b1), (Some(4), Some(3)));
    }

    #[test]
    fn missing_arcs_are_infinite() {
        let g = gadget_weights(&[Some(1), None, Some(1)], &some(&[2, 2, 2]));
        assert_eq!(g.c_r, None);
        assert_eq!(g.k, 1);
        assert_eq!(g.c_n, Some(6));
        assert_eq!((g.a1b2, g.a2b1), (None, Some(6)));
    }

    #[test]
    fn zeros() {
        let g = gadget_weights(&some(&[0; 5]), &some(&[0; 5]));
        assert_eq!((g.a1b1, g.a2b2, g.a1b2, g.a2b1), (Some(0), Some(0), Some(0), Some(0)));
    }
}
