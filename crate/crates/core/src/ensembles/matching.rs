use rand::seq::SliceRandom;
use rand::Rng;

use super::signed_perm::{inversion_count, is_permutation};
use crate::error::{domain, Result};

/// A perfect matching of `[2n]`, stored canonically: each pair sorted, pairs
/// sorted by first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
}

impl PerfectMatching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        if flat.is_empty() || !is_permutation(&flat) {
            return domain(format!("{pairs:?} is not a perfect matching of 1..={}", flat.len()));
        }
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n_modes(&self) -> usize {
        self.pairs.len()
    }

    /// True when the 1-based index set is a union of blocks of the matching.
    pub fn covers_as_union(&self, indices: &[usize]) -> bool {
        let has = |i: usize| indices.contains(&i);
        indices.iter().all(|&i| {
            self.pairs
                .iter()
                .find(|&&(a, b)| a == i || b == i)
                .is_some_and(|&(a, b)| has(a) && has(b))
        })
    }
}

/// `{{p(2i-1), p(2i)} : i ∈ [n]}` for a one-line permutation `p`.
pub fn perfect_matching_of(p: &[usize]) -> Result<PerfectMatching> {
    if p.is_empty() || p.len() % 2 != 0 || !is_permutation(p) {
        return domain(format!("{p:?} is not a permutation of an even-sized set"));
    }
    PerfectMatching::new(p.chunks(2).map(|c| (c[0], c[1])).collect())
}

/// Concatenation of the sorted pairs, pairs ordered by first element. This
/// is the permutation with the fewest inversions among those inducing `m`.
pub fn canonical_permutation(m: &PerfectMatching) -> Vec<usize> {
    m.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
}

/// Every perfect matching of `[2n]`, in lexicographic order.
pub fn all_perfect_matchings(n_modes: usize) -> Vec<PerfectMatching> {
    fn rec(rest: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<PerfectMatching>) {
        if rest.is_empty() {
            out.push(PerfectMatching { pairs: acc.clone() });
            return;
        }
        let first = rest.remove(0);
        for idx in 0..rest.len() {
            let partner = rest.remove(idx);
            acc.push((first, partner));
            rec(rest, acc, out);
            acc.pop();
            rest.insert(idx, partner);
        }
        rest.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (1..=2 * n_modes).collect(), &mut Vec::new(), &mut out);
    out
}

/// A uniformly random permutation with the same matching as `p`: pairs are
/// shuffled as blocks and each pair is internally swapped with probability ½.
pub fn random_matching_equivalent<R: Rng + ?Sized>(p: &[usize], rng: &mut R) -> Vec<usize> {
    let mut blocks: Vec<[usize; 2]> = p.chunks(2).map(|c| [c[0], c[1]]).collect();
    blocks.shuffle(rng);
    for b in &mut blocks {
        if rng.random_bool(0.5) {
            b.swap(0, 1);
        }
    }
    blocks.into_iter().flatten().collect()
}

/// Applies adjacent position swaps to the identity array, in order. Axis `k`
/// swaps positions `k-1` and `k`.
pub fn apply_transpositions(axes: &[usize], size: usize) -> Result<Vec<usize>> {
    let mut a: Vec<usize> = (1..=size).collect();
    for &k in axes {
        if k < 2 || k > size {
            return domain(format!("axis {k} outside 2..={size}"));
        }
        a.swap(k - 2, k - 1);
    }
    Ok(a)
}

/// Adjacent transpositions (as axes) whose application to the identity array
/// yields `p`, in bubblesort order. Their number is `inversion_count(p)`.
pub fn bubblesort_transpositions(p: &[usize]) -> Result<Vec<usize>> {
    if !is_permutation(p) {
        return domain(format!("{p:?} is not a permutation"));
    }
    // Bubble-sorting p⁻¹ produces swaps s_1..s_m with p⁻¹∘s_1∘⋯∘s_m = id,
    // so the same swaps applied to the identity build p. Each pass sweeps
    // ascending axes, giving the triangular layout.
    let mut inv = vec![0usize; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    let mut axes = Vec::with_capacity(inversion_count(p));
    for pass in 0..p.len().saturating_sub(1) {
        for i in 0..p.len() - 1 - pass {
            if inv[i] > inv[i + 1] {
                inv.swap(i, i + 1);
                axes.push(i + 2);
            }
        }
    }
    Ok(axes)
}
