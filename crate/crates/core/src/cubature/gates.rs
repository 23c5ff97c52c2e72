use super::angle::AngleDistribution;
use super::channel::{clifford_tfold_with, ChannelOperator, ChannelVector, MonomialChannel, WordTable};
use crate::ensembles::SignedPermutation;
use crate::error::{domain, Result};
use crate::majorana::{monomial_to_pauli, MajoranaMonomial, PauliString};

/// Convex combination of Clifford channels `Σ w_i C_i`.
#[derive(Clone, Debug)]
pub struct CliffordMixture {
    pub terms: Vec<(f64, MonomialChannel)>,
}

impl ChannelOperator for CliffordMixture {
    fn apply(&self, v: &ChannelVector) -> Result<ChannelVector> {
        let mut out = ChannelVector::zeros(v.n_qubits(), v.t())?;
        for (w, ch) in &self.terms {
            if *w != 0.0 {
                out.add_scaled(*w, &ch.apply(v)?);
            }
        }
        Ok(out)
    }
}

fn check_axis(n_qubits: usize, axis: usize) -> Result<()> {
    if axis < 2 || axis > 2 * n_qubits {
        return domain(format!("axis {axis} outside 2..={}", 2 * n_qubits));
    }
    Ok(())
}

/// `E[G_k(θ)^{⊗3}]` through the four-term Clifford formula with weights
/// `((1-p)/2, (1-p)/2, p/2, p/2)` on `θ = 0, π, π/2, -π/2` and
/// `p = E[sin² θ]`. The distribution must be symmetric about the Clifford
/// angles.
pub fn averaged_gate_3fold(n_qubits: usize, axis: usize, dist: &AngleDistribution) -> Result<CliffordMixture> {
    check_axis(n_qubits, axis)?;
    dist.check_symmetric()?;
    let p = dist.sin2_moment()?;
    clifford_mixture_3fold(&WordTable::new(n_qubits), n_qubits, axis, p)
}

pub(crate) fn clifford_mixture_3fold(table: &WordTable, n_qubits: usize, axis: usize, p: f64) -> Result<CliffordMixture> {
    let weights = [(1.0 - p) / 2.0, p / 2.0, (1.0 - p) / 2.0, p / 2.0];
    let terms = (0..4u8)
        .map(|quarter| {
            let q = SignedPermutation::givens(n_qubits, axis, quarter)?;
            Ok((weights[quarter as usize], clifford_tfold_with(table, &q, 3)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CliffordMixture { terms })
}

/// Per-copy action of the rotation `exp(-iθ/2 P)`: a word either commutes
/// with `P` or maps to `cos θ · A + sin θ · B` with `B = -iAP = ±P_{w'}`.
#[derive(Clone, Copy, Debug)]
enum WordAction {
    Fixed,
    Rotates { partner: u32, sign: i8 },
}

/// `E[G_k(θ)^{⊗t}]` computed directly from the rotation: the channel
/// entries are polynomials in `cos θ, sin θ` of degree ≤ t whose
/// expectations are obtained by quadrature of the density.
#[derive(Clone, Debug)]
pub struct QuadratureGate {
    n_qubits: usize,
    t: usize,
    actions: Vec<WordAction>,
    /// `moments[a][b] = E[cos^a θ sin^b θ]`, `a + b ≤ t`.
    moments: Vec<Vec<f64>>,
}

pub fn brute_3fold_quadrature(n_qubits: usize, axis: usize, dist: &AngleDistribution) -> Result<QuadratureGate> {
    brute_tfold_quadrature(n_qubits, axis, dist, 3)
}

pub fn brute_tfold_quadrature(n_qubits: usize, axis: usize, dist: &AngleDistribution, t: usize) -> Result<QuadratureGate> {
    check_axis(n_qubits, axis)?;
    ChannelVector::zeros(n_qubits, t)?;
    let mut moments = vec![vec![0.0; t + 1]; t + 1];
    for a in 0..=t {
        for b in 0..=t - a {
            moments[a][b] = dist.expectation(|th| th.cos().powi(a as i32) * th.sin().powi(b as i32))?;
        }
    }

    // Hermitian generator P with γ_{k-1}γ_k = iP.
    let pair = monomial_to_pauli(&MajoranaMonomial::new(n_qubits, vec![axis - 1, axis])?);
    let gen = pair.with_phase(0);
    let gen_sign: i8 = match pair.phase() {
        1 => 1,
        3 => -1,
        _ => unreachable!("γ_iγ_j with i ≠ j is anti-Hermitian"),
    };

    let actions = (0..1usize << (2 * n_qubits))
        .map(|w| {
            let a = PauliString::from_word_index(n_qubits, w);
            if a.commutes_with(&gen) {
                return WordAction::Fixed;
            }
            // -i · A · (gen_sign · gen) = gen_sign · i^{e-1} P_{w'}
            let prod = a * gen;
            let e = (prod.phase() + 3) % 4;
            let sign = match e {
                0 => gen_sign,
                2 => -gen_sign,
                _ => unreachable!("anticommuting Hermitian words give a Hermitian product up to ±i"),
            };
            WordAction::Rotates {
                partner: prod.word_index() as u32,
                sign,
            }
        })
        .collect();
    Ok(QuadratureGate {
        n_qubits,
        t,
        actions,
        moments,
    })
}

impl QuadratureGate {
    pub fn moments(&self) -> &[Vec<f64>] {
        &self.moments
    }
}

impl ChannelOperator for QuadratureGate {
    fn apply(&self, v: &ChannelVector) -> Result<ChannelVector> {
        if (v.n_qubits(), v.t()) != (self.n_qubits, self.t) {
            return domain("gate and vector dimensions differ");
        }
        let bits = 2 * self.n_qubits;
        let mut out = ChannelVector::zeros(self.n_qubits, self.t)?;
        let mut rot: Vec<(usize, usize, i8)> = Vec::with_capacity(self.t);
        for (idx, &c) in v.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            rot.clear();
            for copy in 0..self.t {
                let w = v.copy_word(idx, copy);
                if let WordAction::Rotates { partner, sign } = self.actions[w] {
                    rot.push((copy, partner as usize, sign));
                }
            }
            let a = rot.len();
            for subset in 0..1usize << a {
                let mut target = idx;
                let mut sign = 1i8;
                for (bit, &(copy, partner, s)) in rot.iter().enumerate() {
                    if subset >> bit & 1 == 1 {
                        let shift = bits * copy;
                        target = (target & !(((1 << bits) - 1) << shift)) | (partner << shift);
                        sign *= s;
                    }
                }
                let j = subset.count_ones() as usize;
                let m = self.moments[a - j][j];
                out.coeffs_mut()[target] += sign as f64 * m * c;
            }
        }
        Ok(out)
    }
}
