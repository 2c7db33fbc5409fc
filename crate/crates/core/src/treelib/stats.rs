use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use super::classify::{classify, TreeClassParams};
use super::tree::Tree;

/// Combinatorial statistics of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub size: usize,
    /// Tree factorial: product of all subtree sizes.
    pub factorial: BigUint,
    /// Order of the automorphism group.
    pub symmetry: BigUint,
    /// Degree of homogeneity of the tree's series term in the initial datum.
    pub homogeneity: usize,
    pub depth: usize,
    pub simple: bool,
    /// Only known when class parameters were supplied.
    pub short: Option<bool>,
}

pub fn factorial(t: &Tree) -> BigUint {
    let mut g = BigUint::from(t.size());
    for c in t.children() {
        g *= factorial(c);
    }
    g
}

pub fn symmetry(t: &Tree) -> BigUint {
    let kids = t.children();
    let mut s = BigUint::one();
    for c in kids {
        s *= symmetry(c);
    }
    // Two identical branches can be swapped.
    if kids.len() == 2 && kids[0] == kids[1] {
        s *= 2u32;
    }
    s
}

pub fn homogeneity(t: &Tree) -> usize {
    match t.children() {
        [] => 2,
        [c] => 1 + homogeneity(c),
        [a, b] => homogeneity(a) + homogeneity(b),
        _ => unreachable!("at most two children"),
    }
}

pub fn stats(t: &Tree) -> TreeStats {
    TreeStats {
        size: t.size(),
        factorial: factorial(t),
        symmetry: symmetry(t),
        homogeneity: homogeneity(t),
        depth: t.depth(),
        simple: is_simple(t),
        short: None,
    }
}

pub fn stats_with_class(t: &Tree, p: &TreeClassParams) -> TreeStats {
    let mut s = stats(t);
    let (_, short) = classify(t, p);
    s.short = Some(short);
    s
}

pub(crate) fn is_simple(t: &Tree) -> bool {
    match t.children() {
        [] => true,
        [c] => is_simple(c),
        _ => false,
    }
}

/// One row of the tree-factorial lower envelope.
#[derive(Debug, Clone, Serialize)]
pub struct GammaEnvelopeRow {
    pub size: usize,
    pub min_gamma: BigUint,
    pub argmin: String,
    /// `2^(size-1)`
    pub power_bound: BigUint,
    pub power_bound_holds: bool,
}

/// Minimum of the tree factorial over all trees of each size up to
/// `max_size`, compared against `2^(n-1)`.
///
/// The power-of-two bound does not hold in general: `[o,o]` already has
/// factorial 3 < 4. The rows report where it fails.
pub fn verify_gamma_lower_bound(by_size: &[Vec<Tree>]) -> Vec<GammaEnvelopeRow> {
    by_size
        .iter()
        .filter(|trees| !trees.is_empty())
        .map(|trees| {
            let (argmin, min_gamma) = trees
                .iter()
                .map(|t| (t, factorial(t)))
                .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)))
                .expect("nonempty");
            let n = argmin.size();
            let power_bound: BigUint = Pow::pow(BigUint::from(2u32), (n - 1) as u32);
            GammaEnvelopeRow {
                size: n,
                power_bound_holds: min_gamma >= power_bound,
                min_gamma,
                argmin: argmin.encode().to_string(),
                power_bound,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treelib::tree::{graft1, graft2, leaf};

    #[test]
    fn leaf_stats() {
        let s = stats(&leaf());
        assert_eq!(s.size, 1);
        assert_eq!(s.factorial, BigUint::from(1u32));
        assert_eq!(s.symmetry, BigUint::from(1u32));
        assert_eq!(s.homogeneity, 2);
    }

    #[test]
    fn hand_examples() {
        let l = leaf();
        let cherry = graft2(&l, &l);
        let s = stats(&cherry);
        assert_eq!((s.size, s.homogeneity), (3, 4));
        assert_eq!(s.factorial, BigUint::from(3u32));
        assert_eq!(s.symmetry, BigUint::from(2u32));

        let p3 = graft1(&graft1(&l));
        let s = stats(&p3);
        assert_eq!(s.factorial, BigUint::from(6u32));
        assert_eq!(s.symmetry, BigUint::from(1u32));
        assert_eq!(s.homogeneity, 4);

        // perfect binary tree with 7 vertices: 7 * 3 * 3
        let p7 = Tree::perfect(2);
        assert_eq!(p7.size(), 7);
        assert_eq!(factorial(&p7), BigUint::from(63u32));
        assert_eq!(symmetry(&p7), BigUint::from(8u32));
    }

    #[test]
    fn simple_tree_factorial_overflows_u64() {
        let t = Tree::path(25);
        let expected: BigUint = (1u32..=25).map(BigUint::from).product();
        assert_eq!(factorial(&t), expected);
        assert!(factorial(&t) > BigUint::from(u64::MAX));
    }
}
