use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::estimator::{ShadowSample, Transform};
use crate::ensembles::{compose_to_matrix, signed_permutation_of, Ensemble};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest qubit count accepted by [`collect_shadows`].
pub const MAX_SHADOW_QUBITS: usize = 14;

/// Random stream for sample `index` under `seed`; independent of how the
/// work is scheduled across threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `count` shadows: sample a circuit, run it on `state`, measure.
pub fn collect_shadows(state: &StateVector, ensemble: Ensemble, count: usize, seed: u64) -> Result<Vec<ShadowSample>> {
    let n = state.n_qubits();
    if n > MAX_SHADOW_QUBITS {
        return Err(Error::Resource(format!(
            "shadow collection is capped at {MAX_SHADOW_QUBITS} qubits, state has {n}"
        )));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let seq = ensemble.sample(n, &mut rng)?;
            let mut psi = state.clone();
            psi.apply_sequence(&seq)?;
            let outcome = psi.born_sample(&mut rng)?;
            let transform = if ensemble.is_clifford() {
                Transform::Clifford(signed_permutation_of(&seq)?)
            } else {
                Transform::Dense(compose_to_matrix(&seq))
            };
            Ok(ShadowSample {
                transform,
                outcome,
                ensemble,
            })
        })
        .collect()
}
