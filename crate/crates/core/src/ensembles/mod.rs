//! Givens circuits, signed permutations, perfect matchings and the ensemble
//! samplers built from them.

mod brickwall;
mod circuit_json;
mod givens;
mod matching;
mod sampling;
mod signed_perm;

pub use brickwall::{braid_rewrite, brickwall_transform, BrickWallCircuit, TriangularCircuit};
pub use circuit_json::{CircuitRecord, SignedPermutationRecord};
pub use givens::{
    clifford_quarter, compose_to_matrix, cos_sin, givens_matrix, normalize_angle, GivensRotation,
    GivensSequence, OrthogonalMatrix, ORTHOGONALITY_TOL,
};
pub use matching::{
    all_perfect_matchings, apply_transpositions, bubblesort_transpositions, canonical_permutation,
    perfect_matching_of, random_matching_equivalent, PerfectMatching,
};
pub use sampling::{
    add_random_reflection, circuit_depth, clifford_sequence, haar_sequence, sample_angle,
    sample_clifford_angle, sample_optimal_circuit, triangular_axes, CliffordMode,
};
pub use signed_perm::{inversion_count, is_permutation, signed_permutation_of, SignedPermutation};

use rand::Rng;

use crate::error::Result;

/// The sampling schemes offered for shadow collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// Haar on SO(2n) via the triangular decomposition.
    Haar,
    /// Haar on O(2n): Haar on SO(2n) plus a random terminal reflection.
    HaarO2n,
    /// Triangular template with four-angle Clifford distribution.
    FourAngle,
    /// Triangular template with two-angle Clifford distribution.
    TwoAngle,
    /// Gate-optimal perfect-matching sampler.
    Optimal,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Haar,
        Ensemble::HaarO2n,
        Ensemble::FourAngle,
        Ensemble::TwoAngle,
        Ensemble::Optimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Haar => "haar",
            Ensemble::HaarO2n => "haar_o2n",
            Ensemble::FourAngle => "four_angle",
            Ensemble::TwoAngle => "two_angle",
            Ensemble::Optimal => "optimal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Whether samples are exact signed permutations.
    pub fn is_clifford(self) -> bool {
        matches!(self, Ensemble::FourAngle | Ensemble::TwoAngle | Ensemble::Optimal)
    }

    pub fn sample<R: Rng + ?Sized>(self, n_modes: usize, rng: &mut R) -> Result<GivensSequence> {
        match self {
            Ensemble::Haar => haar_sequence(n_modes, rng),
            Ensemble::HaarO2n => Ok(add_random_reflection(haar_sequence(n_modes, rng)?, rng)),
            Ensemble::FourAngle => clifford_sequence(n_modes, rng, CliffordMode::FourAngle),
            Ensemble::TwoAngle => clifford_sequence(n_modes, rng, CliffordMode::TwoAngle),
            Ensemble::Optimal => sample_optimal_circuit(n_modes, rng),
        }
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
