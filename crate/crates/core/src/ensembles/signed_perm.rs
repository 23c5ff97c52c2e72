use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::givens::{clifford_quarter, GivensSequence, OrthogonalMatrix};
use crate::error::{domain, Result};
use crate::majorana::MajoranaMonomial;

/// A signed permutation matrix `Q` on `R^{2n}`: row `r` has the single entry
/// `Q_{r, perm[r]} = signs[r]`, so the matching Clifford circuit maps
/// `γ_r ↦ signs[r] · γ_{perm[r]}`. Values of `perm` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if perm.is_empty() || perm.len() % 2 != 0 {
            return domain(format!("permutation length {} is not a positive even number", perm.len()));
        }
        if perm.len() > 128 {
            return domain("at most 64 modes are supported");
        }
        if signs.len() != perm.len() {
            return domain("sign vector length differs from permutation length");
        }
        if !is_permutation(&perm) {
            return domain(format!("{perm:?} is not a permutation of 1..={}", perm.len()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return domain("signs must be +1 or -1");
        }
        Ok(Self { perm, signs })
    }

    /// Unsigned permutation matrix of a one-line permutation.
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let signs = vec![1; perm.len()];
        Self::new(perm, signs)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            perm: (1..=2 * n_modes).collect(),
            signs: vec![1; 2 * n_modes],
        }
    }

    /// The Clifford Givens rotation `g_axis(q·π/2)` for quarter-turn `q`.
    pub fn givens(n_modes: usize, axis: usize, quarter: u8) -> Result<Self> {
        if axis < 2 || axis > 2 * n_modes {
            return domain(format!("axis {axis} outside 2..={}", 2 * n_modes));
        }
        let mut out = Self::identity(n_modes);
        let (i, j) = (axis - 2, axis - 1);
        match quarter % 4 {
            0 => {}
            1 => {
                out.perm.swap(i, j);
                out.signs[i] = -1;
            }
            2 => {
                out.signs[i] = -1;
                out.signs[j] = -1;
            }
            _ => {
                out.perm.swap(i, j);
                out.signs[j] = -1;
            }
        }
        Ok(out)
    }

    /// `diag(1, …, 1, -1)`.
    pub fn last_reflection(n_modes: usize) -> Self {
        let mut out = Self::identity(n_modes);
        out.signs[2 * n_modes - 1] = -1;
        out
    }

    pub fn n_modes(&self) -> usize {
        self.perm.len() / 2
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Same permutation with new signs.
    pub fn with_signs(&self, signs: Vec<i8>) -> Result<Self> {
        Self::new(self.perm.clone(), signs)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.perm.len(), other.perm.len(), "size mismatch");
        let mut perm = Vec::with_capacity(self.perm.len());
        let mut signs = Vec::with_capacity(self.perm.len());
        for r in 0..self.perm.len() {
            let m = self.perm[r] - 1;
            perm.push(other.perm[m]);
            signs.push(self.signs[r] * other.signs[m]);
        }
        Self { perm, signs }
    }

    /// `Qᵀ = Q⁻¹`.
    pub fn transpose(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        let mut signs = vec![0; self.perm.len()];
        for (r, &c) in self.perm.iter().enumerate() {
            perm[c - 1] = r + 1;
            signs[c - 1] = self.signs[r];
        }
        Self { perm, signs }
    }

    pub fn determinant(&self) -> i8 {
        let s: i8 = self.signs.iter().product();
        if inversion_count(&self.perm) % 2 == 0 {
            s
        } else {
            -s
        }
    }

    pub fn to_matrix(&self) -> OrthogonalMatrix {
        let dim = self.perm.len();
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (r, (&c, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            m[(r, c - 1)] = s as f64;
        }
        OrthogonalMatrix::new(m).expect("signed permutations are orthogonal")
    }

    /// Image of a monomial under the adjoint action:
    /// `U† γ_μ U = sign · γ_ν` with `ν` the sorted image of `μ`.
    pub fn act_on_monomial(&self, mu: &MajoranaMonomial) -> Result<(MajoranaMonomial, i8)> {
        if mu.n_modes() != self.n_modes() {
            return domain("monomial and transformation act on different mode counts");
        }
        let (mask, sign) = self.act_on_mask(mu.mask());
        Ok((MajoranaMonomial::from_mask(mu.n_modes(), mask), sign))
    }

    /// Bit-set version of [`SignedPermutation::act_on_monomial`]; bit `j` is
    /// Majorana index `j + 1`.
    pub fn act_on_mask(&self, mask: u128) -> (u128, i8) {
        let mut sign = 1i8;
        let mut out = 0u128;
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let target = self.perm[j] - 1;
            sign *= self.signs[j];
            // Moving γ_target into sorted position passes every factor
            // already placed above it.
            if (out >> target).count_ones() % 2 == 1 {
                sign = -sign;
            }
            out |= 1u128 << target;
        }
        (out, sign)
    }
}

/// Exact signed permutation of a circuit whose angles are all Clifford.
pub fn signed_permutation_of(seq: &GivensSequence) -> Result<SignedPermutation> {
    let mut q = SignedPermutation::identity(seq.n_modes);
    for r in &seq.rotations {
        let Some(quarter) = clifford_quarter(r.angle) else {
            return domain(format!("angle {} on axis {} is not a Clifford angle", r.angle, r.axis));
        };
        q = SignedPermutation::givens(seq.n_modes, r.axis, quarter)?.compose(&q);
    }
    if seq.terminal_reflection {
        q = SignedPermutation::last_reflection(seq.n_modes).compose(&q);
    }
    Ok(q)
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v == 0 || v > p.len() || seen[v - 1] {
            return false;
        }
        seen[v - 1] = true;
    }
    true
}

/// Number of pairs `i < j` with `p[i] > p[j]`.
pub fn inversion_count(p: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::compose_to_matrix;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn givens_examples() {
        let seq = GivensSequence::from_rotations(1, &[(2, PI)]).unwrap();
        let q = signed_permutation_of(&seq).unwrap();
        assert_eq!(q.perm(), &[1, 2]);
        assert_eq!(q.signs(), &[-1, -1]);

        let seq = GivensSequence::from_rotations(1, &[(2, FRAC_PI_2)]).unwrap();
        let q = signed_permutation_of(&seq).unwrap();
        assert_eq!(q.perm(), &[2, 1]);
        assert_eq!(q.signs(), &[-1, 1]);

        let seq = GivensSequence::from_rotations(2, &[(2, 0.0), (3, 0.0)]).unwrap();
        assert_eq!(signed_permutation_of(&seq).unwrap(), SignedPermutation::identity(2));

        let seq = GivensSequence::from_rotations(1, &[(2, 0.4)]).unwrap();
        assert!(signed_permutation_of(&seq).is_err());
    }

    #[test]
    fn matches_dense_composition() {
        let seq = GivensSequence::from_rotations(
            2,
            &[(2, FRAC_PI_2), (3, PI), (4, -FRAC_PI_2), (3, FRAC_PI_2), (2, 0.0)],
        )
        .unwrap();
        let q = signed_permutation_of(&seq).unwrap();
        assert_eq!(q.to_matrix(), compose_to_matrix(&seq));
    }

    #[test]
    fn act_on_monomial_examples() {
        let mu = MajoranaMonomial::new(2, vec![3, 4]).unwrap();
        let id = SignedPermutation::identity(2);
        assert_eq!(id.act_on_monomial(&mu).unwrap(), (mu.clone(), 1));
        let refl = SignedPermutation::last_reflection(2);
        assert_eq!(refl.act_on_monomial(&mu).unwrap(), (mu, -1));
        let swap = SignedPermutation::from_permutation(vec![2, 1, 3, 4]).unwrap();
        let m12 = MajoranaMonomial::new(2, vec![1, 2]).unwrap();
        assert_eq!(swap.act_on_monomial(&m12).unwrap(), (m12, -1));
    }

    #[test]
    fn transpose_inverts() {
        let q = SignedPermutation::new(vec![3, 1, 4, 2], vec![1, -1, -1, 1]).unwrap();
        assert_eq!(q.compose(&q.transpose()), SignedPermutation::identity(2));
        assert_eq!(q.transpose().to_matrix(), q.to_matrix().transpose());
    }

    #[test]
    fn determinant_matches_dense() {
        let q = SignedPermutation::new(vec![3, 1, 4, 2], vec![1, -1, -1, 1]).unwrap();
        assert!((q.determinant() as f64 - q.to_matrix().determinant()).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(SignedPermutation::new(vec![1, 1], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![1, 2, 3], vec![1, 1, 1]).is_err());
        assert!(SignedPermutation::new(vec![1, 2], vec![1, 0]).is_err());
    }

    #[test]
    fn inversions() {
        assert_eq!(inversion_count(&[1, 2, 3, 4]), 0);
        assert_eq!(inversion_count(&[1, 4, 2, 3]), 2);
        assert_eq!(inversion_count(&[4, 3, 2, 1]), 6);
    }
}
