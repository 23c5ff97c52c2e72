use std::collections::HashMap;

use crate::ensembles::{signed_permutation_of, GivensSequence, SignedPermutation};
use crate::error::{domain, Error, Result};
use crate::majorana::{monomial_to_pauli, MajoranaMonomial, PauliString};

/// Largest `n·t` for which a t-fold channel table is materialized.
pub const CHANNEL_WORD_CAP: usize = 6;

/// Coefficients of a Hermitian operator on `t` copies of `n` qubits in the
/// basis of Hermitian Pauli words. Copy `c` occupies bits `2n·c .. 2n·(c+1)`
/// of the index, each copy encoded as `x_mask | z_mask << n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelVector {
    n_qubits: usize,
    t: usize,
    coeffs: Vec<f64>,
}

impl ChannelVector {
    pub fn zeros(n_qubits: usize, t: usize) -> Result<Self> {
        check_cap(n_qubits, t)?;
        Ok(Self {
            n_qubits,
            t,
            coeffs: vec![0.0; 1 << (2 * n_qubits * t)],
        })
    }

    pub fn basis(n_qubits: usize, t: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(n_qubits, t)?;
        if index >= v.coeffs.len() {
            return domain(format!("basis index {index} out of range"));
        }
        v.coeffs[index] = 1.0;
        Ok(v)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self += w · other`.
    pub fn add_scaled(&mut self, w: f64, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += w * b;
        }
    }

    pub(crate) fn copy_word(&self, index: usize, copy: usize) -> usize {
        (index >> (2 * self.n_qubits * copy)) & ((1 << (2 * self.n_qubits)) - 1)
    }
}

fn check_cap(n_qubits: usize, t: usize) -> Result<()> {
    if n_qubits == 0 || t == 0 {
        return domain("qubit and copy counts must be positive");
    }
    if n_qubits * t > CHANNEL_WORD_CAP {
        return Err(Error::Resource(format!(
            "t-fold channels are capped at n·t ≤ {CHANNEL_WORD_CAP}, requested n = {n_qubits}, t = {t}"
        )));
    }
    Ok(())
}

/// A linear map on [`ChannelVector`]s.
pub trait ChannelOperator: Send + Sync {
    fn apply(&self, v: &ChannelVector) -> Result<ChannelVector>;
}

/// Correspondence between single-copy Pauli words and Majorana monomials:
/// `γ_μ = i^φ P_w`.
#[derive(Clone, Debug)]
pub(crate) struct WordTable {
    /// word → (monomial mask, φ)
    word_to_monomial: Vec<(u128, u8)>,
    /// monomial mask → (word, φ)
    monomial_to_word: HashMap<u128, (usize, u8)>,
}

impl WordTable {
    pub(crate) fn new(n: usize) -> Self {
        let size = 1usize << (2 * n);
        let mut word_to_monomial = vec![(0u128, 0u8); size];
        let mut monomial_to_word = HashMap::with_capacity(size);
        for mask in 0..size as u128 {
            let p: PauliString = monomial_to_pauli(&MajoranaMonomial::from_mask(n, mask));
            let w = p.word_index();
            word_to_monomial[w] = (mask, p.phase());
            monomial_to_word.insert(mask, (w, p.phase()));
        }
        Self {
            word_to_monomial,
            monomial_to_word,
        }
    }

    /// Single-copy action of `A ↦ U†AU` for the Clifford circuit with
    /// signed permutation `q`: word → (word', ±1).
    pub(crate) fn signed_word_map(&self, q: &SignedPermutation) -> Vec<(u32, i8)> {
        self.word_to_monomial
            .iter()
            .map(|&(mask, phi)| {
                let (image, sign) = q.act_on_mask(mask);
                let (w2, phi2) = self.monomial_to_word[&image];
                // U†P_wU = i^{-φ} s γ_ν = i^{φ'-φ} s P_{w'}
                let e = (4 + phi2 as i32 - phi as i32) % 4;
                debug_assert!(e % 2 == 0, "Clifford images of Hermitian words are Hermitian");
                let s = if e == 0 { sign } else { -sign };
                (w2 as u32, s)
            })
            .collect()
    }
}

/// The t-fold channel `A ↦ (U†)^{⊗t} A U^{⊗t}` of a Clifford matchgate
/// circuit, a signed permutation of the t-fold Pauli words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialChannel {
    n_qubits: usize,
    t: usize,
    table: Vec<(u32, i8)>,
}

impl MonomialChannel {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Image of basis word `index`: `(index', ±1)`.
    pub fn image(&self, index: usize) -> (usize, i8) {
        let (w, s) = self.table[index];
        (w as usize, s)
    }

    pub(crate) fn from_single_copy(n_qubits: usize, t: usize, single: &[(u32, i8)]) -> Result<Self> {
        check_cap(n_qubits, t)?;
        let bits = 2 * n_qubits;
        let size = 1usize << (bits * t);
        let table = (0..size)
            .map(|idx| {
                let mut out = 0usize;
                let mut sign = 1i8;
                for c in 0..t {
                    let w = (idx >> (bits * c)) & ((1 << bits) - 1);
                    let (w2, s) = single[w];
                    out |= (w2 as usize) << (bits * c);
                    sign *= s;
                }
                (out as u32, sign)
            })
            .collect();
        Ok(Self { n_qubits, t, table })
    }

    /// `self` after `other` as maps on operators: `(self ∘ other)(A)`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!((self.n_qubits, self.t), (other.n_qubits, other.t));
        let table = other
            .table
            .iter()
            .map(|&(w, s)| {
                let (w2, s2) = self.table[w as usize];
                (w2, s * s2)
            })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            t: self.t,
            table,
        }
    }
}

impl ChannelOperator for MonomialChannel {
    fn apply(&self, v: &ChannelVector) -> Result<ChannelVector> {
        if (v.n_qubits, v.t) != (self.n_qubits, self.t) {
            return domain("channel and vector dimensions differ");
        }
        let mut out = ChannelVector::zeros(self.n_qubits, self.t)?;
        for (i, &c) in v.coeffs.iter().enumerate() {
            if c != 0.0 {
                let (j, s) = self.table[i];
                out.coeffs[j as usize] += s as f64 * c;
            }
        }
        Ok(out)
    }
}

/// Clifford circuits accepted by [`clifford_tfold`].
pub enum CliffordInput<'a> {
    SignedPermutation(&'a SignedPermutation),
    Sequence(&'a GivensSequence),
}

/// Exact t-fold channel of a Clifford matchgate circuit.
pub fn clifford_tfold(u: CliffordInput<'_>, t: usize) -> Result<MonomialChannel> {
    let q = match u {
        CliffordInput::SignedPermutation(q) => q.clone(),
        CliffordInput::Sequence(seq) => signed_permutation_of(seq)?,
    };
    let n = q.n_modes();
    check_cap(n, t)?;
    let single = WordTable::new(n).signed_word_map(&q);
    MonomialChannel::from_single_copy(n, t, &single)
}

/// Same as [`clifford_tfold`] reusing a word table.
pub(crate) fn clifford_tfold_with(table: &WordTable, q: &SignedPermutation, t: usize) -> Result<MonomialChannel> {
    MonomialChannel::from_single_copy(q.n_modes(), t, &table.signed_word_map(q))
}
