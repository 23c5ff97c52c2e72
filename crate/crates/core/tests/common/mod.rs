//! Dense-matrix oracles shared by the integration tests. Everything here is
//! built from explicit 2×2 blocks, independently of the library's own
//! Pauli and Majorana arithmetic.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_2x2(label: char) -> DMatrix<C64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match label {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("unknown Pauli label {label}"),
    }
}

/// Tensor product of single-qubit factors, qubit 1 leftmost.
pub fn kron_word(word: &str) -> DMatrix<C64> {
    word.chars()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, l| acc.kronecker(&pauli_2x2(l)))
}

/// `γ_{2k-1} = Z…Z X_k`, `γ_{2k} = Z…Z Y_k`.
pub fn jw(k: usize, n: usize) -> DMatrix<C64> {
    let q = (k + 1) / 2;
    let word: String = (1..=n)
        .map(|j| match j.cmp(&q) {
            std::cmp::Ordering::Less => 'Z',
            std::cmp::Ordering::Equal => if k % 2 == 1 { 'X' } else { 'Y' },
            std::cmp::Ordering::Greater => 'I',
        })
        .collect();
    kron_word(&word)
}

pub fn monomial(indices: &[usize], n: usize) -> DMatrix<C64> {
    let dim = 1 << n;
    indices.iter().fold(DMatrix::identity(dim, dim), |acc, &k| acc * jw(k, n))
}

pub fn identity(n: usize) -> DMatrix<C64> {
    DMatrix::identity(1 << n, 1 << n)
}

/// `exp(-iθ/2 P)` for `P² = I`.
pub fn rotation(p: &DMatrix<C64>, theta: f64) -> DMatrix<C64> {
    let n = p.nrows();
    DMatrix::identity(n, n) * c((theta / 2.0).cos(), 0.0) - p * c(0.0, (theta / 2.0).sin())
}

/// Dense Givens gate on axis `k`: `Z_q` for `k = 2q`, `X_q X_{q+1}` for
/// `k = 2q+1`.
pub fn givens_unitary(axis: usize, theta: f64, n: usize) -> DMatrix<C64> {
    let q = axis / 2;
    let word: String = (1..=n)
        .map(|j| {
            if axis % 2 == 0 {
                if j == q { 'Z' } else { 'I' }
            } else if j == q || j == q + 1 {
                'X'
            } else {
                'I'
            }
        })
        .collect();
    rotation(&kron_word(&word), theta)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

pub fn column(amps: &[C64]) -> DMatrix<C64> {
    DMatrix::from_column_slice(amps.len(), 1, amps)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expect(a: &DMatrix<C64>, psi: &[C64]) -> C64 {
    let v = column(psi);
    (v.adjoint() * a * &v)[(0, 0)]
}
