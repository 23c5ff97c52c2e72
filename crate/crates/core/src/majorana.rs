//! Pauli strings, Majorana monomials and the Jordan–Wigner map between them.
//!
//! Conventions used throughout the crate:
//!
//! * Qubits (fermionic modes) are labelled `1..=n`, Majorana operators `1..=2n`.
//! * `γ_{2k-1} = Z_1 … Z_{k-1} X_k` and `γ_{2k} = Z_1 … Z_{k-1} Y_k`.
//! * In a computational-basis index, qubit 1 is the most significant bit.
//!
//! Phases are tracked as exponents of `i` and never touch floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64 as C64};

use crate::error::{domain, Error, Result};

/// Largest qubit count for which dense matrices are materialized.
pub const DENSE_QUBIT_CAP: usize = 6;

/// Value of `i^e` as a complex number.
pub fn i_pow(e: u8) -> C64 {
    match e % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A computational-basis bitstring `z ∈ {0,1}^n`; qubit 1 is the most
/// significant bit of [`Bitstring::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    n: usize,
    index: u64,
}

impl Bitstring {
    pub fn new(n: usize, index: u64) -> Result<Self> {
        if n > 64 || (n < 64 && index >> n != 0) {
            return domain(format!("index {index} does not fit in {n} bits"));
        }
        Ok(Self { n, index })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, index: 0 }
    }

    /// Builds a bitstring from per-qubit values, qubit 1 first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut index = 0u64;
        for &b in bits {
            if b > 1 {
                return domain(format!("bit value {b} is not 0 or 1"));
            }
            index = (index << 1) | b as u64;
        }
        Self::new(bits.len(), index)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Value of qubit `k` (1-based).
    pub fn bit(&self, k: usize) -> u8 {
        debug_assert!(k >= 1 && k <= self.n);
        ((self.index >> (self.n - k)) & 1) as u8
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.n {
            write!(f, "{}", self.bit(k))?;
        }
        Ok(())
    }
}

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn dense(self) -> DMatrix<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }
}

/// `i^phase · P_1 ⊗ … ⊗ P_n` with `P_k ∈ {I, X, Y, Z}`.
///
/// Bit `k-1` of `x_mask`/`z_mask` describes qubit `k`; `(1,1)` encodes `Y`
/// itself (not `XZ`), so a string with phase 0 is Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    phase: u8,
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    pub fn new(n_qubits: usize, phase: u8, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return domain(format!("qubit count {n_qubits} outside 1..=64"));
        }
        let full = low_mask(n_qubits);
        if x_mask & !full != 0 || z_mask & !full != 0 {
            return domain("Pauli masks exceed the qubit count");
        }
        Ok(Self {
            n_qubits,
            phase: phase % 4,
            x_mask,
            z_mask,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            phase: 0,
            x_mask: 0,
            z_mask: 0,
        }
    }

    /// Builds `i^phase ⊗_k factors[k]`, qubit 1 first.
    pub fn from_factors(phase: u8, factors: &[Pauli]) -> Result<Self> {
        let (mut x, mut z) = (0u64, 0u64);
        for (q, p) in factors.iter().enumerate() {
            let (xb, zb) = p.bits();
            x |= (xb as u64) << q;
            z |= (zb as u64) << q;
        }
        Self::new(factors.len(), phase, x, z)
    }

    /// The Hermitian basis word with the given compact index
    /// `x_mask | z_mask << n` (see [`PauliString::word_index`]).
    pub fn from_word_index(n_qubits: usize, index: usize) -> Self {
        let full = low_mask(n_qubits);
        Self {
            n_qubits,
            phase: 0,
            x_mask: index as u64 & full,
            z_mask: (index as u64 >> n_qubits) & full,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Exponent `e` of the prefactor `i^e`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        let b = qubit - 1;
        Pauli::from_bits((self.x_mask >> b) & 1 == 1, (self.z_mask >> b) & 1 == 1)
    }

    pub fn has_identity_masks(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Index of the phase-free word in `0..4^n`.
    pub fn word_index(&self) -> usize {
        (self.x_mask | (self.z_mask << self.n_qubits)) as usize
    }

    /// Same masks, phase reset to `i^phase`.
    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let sym = (self.x_mask & other.z_mask) ^ (self.z_mask & other.x_mask);
        sym.count_ones() % 2 == 0
    }

    /// Action on a computational-basis state: `P|b⟩ = i^e |b'⟩`, returned as
    /// `(e, b')`. Uses the crate endianness (qubit 1 is the top bit of `b`).
    pub fn apply_to_basis(&self, index: usize) -> (u8, usize) {
        let xi = reverse_bits(self.x_mask, self.n_qubits) as usize;
        let zi = reverse_bits(self.z_mask, self.n_qubits) as usize;
        let n_y = (self.x_mask & self.z_mask).count_ones();
        let flips = (index & zi).count_ones();
        let e = (self.phase as u32 + n_y + 2 * flips) % 4;
        (e as u8, index ^ xi)
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        assert_eq!(self.n_qubits, rhs.n_qubits, "qubit count mismatch");
        let mut e: i32 = self.phase as i32 + rhs.phase as i32;
        for q in 0..self.n_qubits {
            let x1 = (self.x_mask >> q) & 1 == 1;
            let z1 = (self.z_mask >> q) & 1 == 1;
            let x2 = (rhs.x_mask >> q) & 1 == 1;
            let z2 = (rhs.z_mask >> q) & 1 == 1;
            e += single_qubit_phase(x1, z1, x2, z2);
        }
        PauliString {
            n_qubits: self.n_qubits,
            phase: e.rem_euclid(4) as u8,
            x_mask: self.x_mask ^ rhs.x_mask,
            z_mask: self.z_mask ^ rhs.z_mask,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for q in 1..=self.n_qubits {
            let c = match self.factor(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

// Exponent of i picked up by the single-qubit product (x1,z1)·(x2,z2).
fn single_qubit_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn reverse_bits(mask: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - n)
    }
}

/// A Majorana monomial `γ_μ = γ_{μ_1} ⋯ γ_{μ_k}` over a strictly increasing
/// set of 1-based indices. The empty set is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MajoranaMonomial {
    n_modes: usize,
    indices: Vec<usize>,
}

impl MajoranaMonomial {
    pub fn new(n_modes: usize, indices: Vec<usize>) -> Result<Self> {
        if n_modes == 0 || n_modes > 64 {
            return domain(format!("mode count {n_modes} outside 1..=64"));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return domain(format!("indices {indices:?} are not strictly increasing"));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > 2 * n_modes) {
            return domain(format!("Majorana index {bad} outside 1..={}", 2 * n_modes));
        }
        Ok(Self { n_modes, indices })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            indices: Vec::new(),
        }
    }

    /// Monomial from a bit set: bit `j` present means index `j + 1`.
    pub fn from_mask(n_modes: usize, mask: u128) -> Self {
        let indices = (0..2 * n_modes).filter(|j| (mask >> j) & 1 == 1).map(|j| j + 1).collect();
        Self { n_modes, indices }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn mask(&self) -> u128 {
        self.indices.iter().fold(0u128, |m, &i| m | (1u128 << (i - 1)))
    }

    /// True when the index set is a disjoint union of pairs `{2k-1, 2k}`.
    pub fn is_pair_union(&self) -> bool {
        is_pair_union_mask(self.mask())
    }
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn is_pair_union_mask(mask: u128) -> bool {
    const ODD: u128 = 0x5555_5555_5555_5555_5555_5555_5555_5555;
    (mask & ODD) == ((mask >> 1) & ODD)
}

/// Jordan–Wigner image of the single Majorana operator `γ_k`.
pub fn jw_pauli(k: usize, n: usize) -> Result<PauliString> {
    if n == 0 || n > 64 {
        return domain(format!("mode count {n} outside 1..=64"));
    }
    if k == 0 || k > 2 * n {
        return domain(format!("Majorana index {k} outside 1..={}", 2 * n));
    }
    let q = (k + 1) / 2;
    let prefix = low_mask(q - 1);
    let x = 1u64 << (q - 1);
    let z = if k % 2 == 0 { prefix | x } else { prefix };
    PauliString::new(n, 0, x, z)
}

/// Ordered product of the Jordan–Wigner images of a monomial's factors.
pub fn monomial_to_pauli(m: &MajoranaMonomial) -> PauliString {
    m.indices().iter().fold(PauliString::identity(m.n_modes()), |acc, &k| {
        acc * jw_pauli(k, m.n_modes()).expect("monomial indices are validated")
    })
}

/// `⟨z|γ_μ|z⟩` as an exact phase: `Some(e)` means `i^e`, `None` means zero.
pub fn bitstring_expectation_phase(m: &MajoranaMonomial, z: &Bitstring) -> Result<Option<u8>> {
    if z.len() != m.n_modes() {
        return domain(format!(
            "bitstring of length {} for a monomial on {} modes",
            z.len(),
            m.n_modes()
        ));
    }
    Ok(pair_union_expectation(m.mask(), z))
}

/// `⟨z|γ_μ|z⟩`, nonzero only on disjoint unions of adjacent pairs where each
/// pair `{2k-1, 2k}` contributes `i·(-1)^{z_k}`.
pub fn bitstring_expectation(m: &MajoranaMonomial, z: &Bitstring) -> Result<C64> {
    Ok(bitstring_expectation_phase(m, z)?.map_or(C64::new(0.0, 0.0), i_pow))
}

pub(crate) fn pair_union_expectation(mask: u128, z: &Bitstring) -> Option<u8> {
    if !is_pair_union_mask(mask) {
        return None;
    }
    let mut e = 0u32;
    for k in 1..=z.len() {
        if (mask >> (2 * k - 2)) & 1 == 1 {
            e += 1 + 2 * z.bit(k) as u32;
        }
    }
    Some((e % 4) as u8)
}

/// Dense `2^n × 2^n` matrix representation, for use as a test oracle.
pub trait DenseOperator {
    fn dense_matrix(&self) -> Result<DMatrix<C64>>;
}

fn check_dense_cap(n: usize) -> Result<()> {
    if n > DENSE_QUBIT_CAP {
        return Err(Error::Resource(format!(
            "dense matrices are capped at {DENSE_QUBIT_CAP} qubits, requested {n}"
        )));
    }
    Ok(())
}

impl DenseOperator for PauliString {
    fn dense_matrix(&self) -> Result<DMatrix<C64>> {
        check_dense_cap(self.n_qubits)?;
        let mut m = DMatrix::from_element(1, 1, i_pow(self.phase));
        for q in 1..=self.n_qubits {
            m = m.kronecker(&self.factor(q).dense());
        }
        Ok(m)
    }
}

impl DenseOperator for MajoranaMonomial {
    fn dense_matrix(&self) -> Result<DMatrix<C64>> {
        check_dense_cap(self.n_modes)?;
        let dim = 1usize << self.n_modes;
        let mut acc = DMatrix::<C64>::identity(dim, dim);
        for &k in &self.indices {
            acc *= jw_pauli(k, self.n_modes)?.dense_matrix()?;
        }
        Ok(acc)
    }
}

/// Sorts a word of Majorana indices using anticommutation and cancels
/// repeated factors (`γ_k² = I`). Returns the sign and the reduced index set.
pub(crate) fn reduce_word(word: &[usize]) -> (i32, Vec<usize>) {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    let mut out: Vec<usize> = Vec::with_capacity(w.len());
    for k in w {
        if out.last() == Some(&k) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    (sign, out)
}

/// A linear combination `Σ c_μ γ_μ` with coefficients `c_μ = g_μ / 2^s`,
/// `g_μ` a Gaussian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajoranaCombination {
    n_modes: usize,
    scale_log2: u32,
    terms: BTreeMap<MajoranaMonomial, Complex<i64>>,
}

impl MajoranaCombination {
    pub fn zero(n_modes: usize) -> Self {
        Self {
            n_modes,
            scale_log2: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent `s` of the common denominator `2^s`.
    pub fn scale_log2(&self) -> u32 {
        self.scale_log2
    }

    /// Exact Gaussian-integer numerators.
    pub fn numerators(&self) -> impl Iterator<Item = (&MajoranaMonomial, Complex<i64>)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &MajoranaMonomial) -> C64 {
        self.terms.get(m).map_or(C64::new(0.0, 0.0), |c| self.to_float(*c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MajoranaMonomial, C64)> + '_ {
        self.terms.iter().map(move |(m, c)| (m, self.to_float(*c)))
    }

    fn to_float(&self, c: Complex<i64>) -> C64 {
        let d = (self.scale_log2 as f64).exp2();
        C64::new(c.re as f64 / d, c.im as f64 / d)
    }
}

/// Expands `a†_{p1} ⋯ a†_{pk} a_{q1} ⋯ a_{qk}` over Majorana monomials using
/// `a_p = (γ_{2p-1} + iγ_{2p})/2` and `a†_p = (γ_{2p-1} - iγ_{2p})/2`.
pub fn rdm_expansion(p: &[usize], q: &[usize], n: usize) -> Result<MajoranaCombination> {
    if p.len() != q.len() {
        return domain(format!(
            "creation and annihilation lists differ in length ({} vs {})",
            p.len(),
            q.len()
        ));
    }
    if n == 0 || n > 64 {
        return domain(format!("mode count {n} outside 1..=64"));
    }
    if let Some(&bad) = p.iter().chain(q).find(|&&i| i == 0 || i > n) {
        return domain(format!("mode index {bad} outside 1..={n}"));
    }
    let has_repeat = |v: &[usize]| (1..v.len()).any(|i| v[..i].contains(&v[i]));
    if has_repeat(p) || has_repeat(q) {
        return Ok(MajoranaCombination::zero(n));
    }

    // Each ladder operator is a two-term sum (index, coefficient).
    let one = Complex::new(1i64, 0);
    let i = Complex::new(0i64, 1);
    let factors: Vec<[(usize, Complex<i64>); 2]> = p
        .iter()
        .map(|&m| [(2 * m - 1, one), (2 * m, -i)])
        .chain(q.iter().map(|&m| [(2 * m - 1, one), (2 * m, i)]))
        .collect();

    let mut terms: BTreeMap<MajoranaMonomial, Complex<i64>> = BTreeMap::new();
    let mut word = vec![0usize; factors.len()];
    for choice in 0u64..(1u64 << factors.len()) {
        let mut coeff = one;
        for (f, pair) in factors.iter().enumerate() {
            let (idx, c) = pair[((choice >> f) & 1) as usize];
            word[f] = idx;
            coeff *= c;
        }
        let (sign, reduced) = reduce_word(&word);
        let m = MajoranaMonomial {
            n_modes: n,
            indices: reduced,
        };
        *terms.entry(m).or_insert(Complex::new(0, 0)) += coeff * sign as i64;
    }
    terms.retain(|_, c| c.re != 0 || c.im != 0);
    Ok(MajoranaCombination {
        n_modes: n,
        scale_log2: 2 * p.len() as u32,
        terms,
    })
}
