use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Tolerance used when recognizing a stored angle as a Clifford angle.
pub const CLIFFORD_ANGLE_TOL: f64 = 1e-12;

/// Orthogonality tolerance for composed matrices.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Maps an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// Quarter-turn index of a Clifford angle: `0 → 0`, `π/2 → 1`, `π → 2`,
/// `-π/2 → 3`. `None` for any other angle.
pub fn clifford_quarter(theta: f64) -> Option<u8> {
    let t = normalize_angle(theta);
    [(0.0, 0u8), (FRAC_PI_2, 1), (PI, 2), (-FRAC_PI_2, 3)]
        .iter()
        .find(|(a, _)| (t - a).abs() <= CLIFFORD_ANGLE_TOL)
        .map(|&(_, q)| q)
        .or_else(|| ((t + PI).abs() <= CLIFFORD_ANGLE_TOL).then_some(2))
}

/// `(cos θ, sin θ)`, exact at the Clifford angles.
pub fn cos_sin(theta: f64) -> (f64, f64) {
    match clifford_quarter(theta) {
        Some(0) => (1.0, 0.0),
        Some(1) => (0.0, 1.0),
        Some(2) => (-1.0, 0.0),
        Some(3) => (0.0, -1.0),
        _ => (theta.cos(), theta.sin()),
    }
}

/// Givens rotation `g_k(θ)` in the plane of Majorana axes `(k-1, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivensRotation {
    pub axis: usize,
    pub angle: f64,
}

impl GivensRotation {
    pub fn new(axis: usize, angle: f64, n_modes: usize) -> Result<Self> {
        if axis < 2 || axis > 2 * n_modes {
            return domain(format!("axis {axis} outside 2..={}", 2 * n_modes));
        }
        if !angle.is_finite() {
            return domain("rotation angle is not finite");
        }
        Ok(Self {
            axis,
            angle: normalize_angle(angle),
        })
    }

    /// Jordan–Wigner qubits touched by the rotation: one qubit for odd pairs
    /// `(2q-1, 2q)`, two adjacent qubits for even pairs `(2q, 2q+1)`.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        if self.axis % 2 == 0 {
            (self.axis / 2, None)
        } else {
            let q = (self.axis - 1) / 2;
            (q, Some(q + 1))
        }
    }
}

/// A circuit of adjacent Givens rotations in time order, optionally followed
/// by the reflection `γ_{2n} ↦ -γ_{2n}` (Pauli `X` on the last qubit).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivensSequence {
    pub n_modes: usize,
    pub rotations: Vec<GivensRotation>,
    pub terminal_reflection: bool,
}

impl GivensSequence {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return domain("mode count must be positive");
        }
        Ok(Self {
            n_modes,
            rotations: Vec::new(),
            terminal_reflection: false,
        })
    }

    pub fn from_rotations(n_modes: usize, rotations: &[(usize, f64)]) -> Result<Self> {
        let mut seq = Self::new(n_modes)?;
        for &(axis, angle) in rotations {
            seq.push(axis, angle)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, axis: usize, angle: f64) -> Result<()> {
        self.rotations.push(GivensRotation::new(axis, angle, self.n_modes)?);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn is_clifford(&self) -> bool {
        self.rotations.iter().all(|r| clifford_quarter(r.angle).is_some())
    }

    /// Checks ranges after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return domain("mode count must be positive");
        }
        for r in &self.rotations {
            GivensRotation::new(r.axis, r.angle, self.n_modes)?;
        }
        Ok(())
    }

    /// Concatenation: `self` first, then `other`. A reflection on `self` is
    /// only allowed when it is the last gate of the result.
    pub fn then(&self, other: &GivensSequence) -> Result<GivensSequence> {
        if self.n_modes != other.n_modes {
            return domain("mode counts differ");
        }
        if self.terminal_reflection && !other.is_empty() {
            return domain("a terminal reflection must stay last");
        }
        let mut rotations = self.rotations.clone();
        rotations.extend_from_slice(&other.rotations);
        Ok(GivensSequence {
            n_modes: self.n_modes,
            rotations,
            terminal_reflection: self.terminal_reflection || other.terminal_reflection,
        })
    }
}

/// A real orthogonal `2n × 2n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix(DMatrix<f64>);

impl OrthogonalMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return domain(format!("expected a nonempty even square matrix, got {}x{}", m.nrows(), m.ncols()));
        }
        let dev = orthogonality_defect(&m);
        if dev > ORTHOGONALITY_TOL {
            return domain(format!("matrix is not orthogonal (defect {dev:e})"));
        }
        Ok(Self(m))
    }

    pub fn identity(n_modes: usize) -> Self {
        Self(DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Entry `Q_{ab}` with 1-based indices.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.0[(a - 1, b - 1)]
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// `max |QᵀQ - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `det(Q_{μν})` with `(Q_{μν})_{ij} = Q_{μ_i ν_j}`, 1-based index sets.
    pub fn minor_determinant(&self, mu: &[usize], nu: &[usize]) -> Result<f64> {
        if mu.len() != nu.len() {
            return domain(format!("minor index sets differ in size ({} vs {})", mu.len(), nu.len()));
        }
        let dim = self.0.nrows();
        if let Some(&bad) = mu.iter().chain(nu).find(|&&i| i == 0 || i > dim) {
            return domain(format!("index {bad} outside 1..={dim}"));
        }
        Ok(self.minor_unchecked(mu, nu))
    }

    pub(crate) fn minor_unchecked(&self, mu: &[usize], nu: &[usize]) -> f64 {
        let q = |i: usize, j: usize| self.0[(mu[i] - 1, nu[j] - 1)];
        match mu.len() {
            0 => 1.0,
            1 => q(0, 0),
            2 => q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0),
            k => DMatrix::from_fn(k, k, q).determinant(),
        }
    }
}

fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let id = DMatrix::<f64>::identity(m.nrows(), m.ncols());
    (g - id).amax()
}

/// Dense matrix of `g_k(θ)` on `R^{2n}`.
pub fn givens_matrix(axis: usize, angle: f64, n_modes: usize) -> Result<DMatrix<f64>> {
    let r = GivensRotation::new(axis, angle, n_modes)?;
    let (c, s) = cos_sin(r.angle);
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (i, j) = (axis - 2, axis - 1);
    m[(i, i)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m[(j, j)] = c;
    Ok(m)
}

/// `Q = R · g_m ⋯ g_1` for a sequence `g_1, …, g_m` in time order, where `R`
/// is the terminal reflection if present. With this ordering the circuit
/// `U = G_m ⋯ G_1` satisfies `U† γ_k U = Σ_l Q_{kl} γ_l`.
pub fn compose_to_matrix(seq: &GivensSequence) -> OrthogonalMatrix {
    let dim = 2 * seq.n_modes;
    let mut q = DMatrix::<f64>::identity(dim, dim);
    for r in &seq.rotations {
        let (c, s) = cos_sin(r.angle);
        let (i, j) = (r.axis - 2, r.axis - 1);
        for col in 0..dim {
            let (a, b) = (q[(i, col)], q[(j, col)]);
            q[(i, col)] = c * a - s * b;
            q[(j, col)] = s * a + c * b;
        }
    }
    if seq.terminal_reflection {
        for col in 0..dim {
            q[(dim - 1, col)] = -q[(dim - 1, col)];
        }
    }
    OrthogonalMatrix(q)
}
