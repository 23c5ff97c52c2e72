use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::brickwall::BrickWallCircuit;
use super::givens::GivensSequence;
use super::matching::{canonical_permutation, perfect_matching_of};
use crate::error::{domain, Result};

/// Draws an angle on `(-π, π]` with density proportional to `|sin θ|^{k-2}`.
pub fn sample_angle<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<f64> {
    if k < 2 {
        return domain(format!("angle index k = {k} must be at least 2"));
    }
    if k == 2 {
        return Ok(PI - 2.0 * PI * rng.random::<f64>());
    }
    let a = (k as f64 - 1.0) / 2.0;
    let beta = Beta::new(a, a).map_err(|e| crate::Error::Internal(e.to_string()))?;
    let u = (2.0 * beta.sample(rng) - 1.0).clamp(-1.0, 1.0);
    let theta = u.acos();
    Ok(if rng.random_bool(0.5) && theta < PI { -theta } else { theta })
}

/// Axes of the triangular template in time order: row `l = 1..2n-1` holds
/// axes `2..=2n+1-l` in ascending order.
pub fn triangular_axes(n_modes: usize) -> impl Iterator<Item = usize> {
    let m = 2 * n_modes;
    (1..m).flat_map(move |l| 2..=m + 1 - l)
}

/// Haar-random element of SO(2n) as a triangular circuit of `n(2n-1)`
/// rotations, the gate on axis `k` drawn from `|sin θ|^{k-2}`.
pub fn haar_sequence<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> Result<GivensSequence> {
    let mut seq = GivensSequence::new(n_modes)?;
    for k in triangular_axes(n_modes) {
        let theta = sample_angle(k, rng)?;
        seq.push(k, theta)?;
    }
    Ok(seq)
}

/// Finite angle distributions on the Clifford angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordMode {
    /// `P(0) = P(π) = 1/(2k)`, `P(±π/2) = (k-1)/(2k)`.
    FourAngle,
    /// `P(0) = 1/k`, `P(π/2) = (k-1)/k`.
    TwoAngle,
}

/// Draws one Clifford angle for a gate on axis `k`.
pub fn sample_clifford_angle<R: Rng + ?Sized>(k: usize, mode: CliffordMode, rng: &mut R) -> f64 {
    let kf = k as f64;
    let u: f64 = rng.random();
    match mode {
        CliffordMode::TwoAngle => {
            if u < 1.0 / kf {
                0.0
            } else {
                FRAC_PI_2
            }
        }
        CliffordMode::FourAngle => {
            let p0 = 1.0 / (2.0 * kf);
            let ph = (kf - 1.0) / (2.0 * kf);
            if u < p0 {
                0.0
            } else if u < 2.0 * p0 {
                PI
            } else if u < 2.0 * p0 + ph {
                FRAC_PI_2
            } else {
                -FRAC_PI_2
            }
        }
    }
}

/// Triangular circuit with Clifford angles drawn per gate.
pub fn clifford_sequence<R: Rng + ?Sized>(n_modes: usize, rng: &mut R, mode: CliffordMode) -> Result<GivensSequence> {
    let mut seq = GivensSequence::new(n_modes)?;
    for k in triangular_axes(n_modes) {
        seq.push(k, sample_clifford_angle(k, mode, rng))?;
    }
    Ok(seq)
}

/// Toggles the terminal reflection with probability ½.
pub fn add_random_reflection<R: Rng + ?Sized>(mut seq: GivensSequence, rng: &mut R) -> GivensSequence {
    if rng.random_bool(0.5) {
        seq.terminal_reflection = !seq.terminal_reflection;
    }
    seq
}

/// Gate-optimal Clifford circuit: random permutation, its perfect matching,
/// the canonical (fewest-inversion) representative, then a brick-wall
/// arrangement of `π/2` rotations with one gate per inversion.
pub fn sample_optimal_circuit<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> Result<GivensSequence> {
    if n_modes == 0 {
        return domain("mode count must be positive");
    }
    let mut p: Vec<usize> = (1..=2 * n_modes).collect();
    p.shuffle(rng);
    let canonical = canonical_permutation(&perfect_matching_of(&p)?);
    let circuit = BrickWallCircuit::for_permutation(&canonical)?;
    let mut seq = GivensSequence::new(n_modes)?;
    for k in circuit.transpositions() {
        seq.push(k, FRAC_PI_2)?;
    }
    Ok(seq)
}

/// Layer count after greedy left-alignment: each gate goes to the first
/// layer after every earlier gate it does not commute with (axes closer
/// than 2 apart).
pub fn circuit_depth(seq: &GivensSequence) -> usize {
    let mut last = vec![0usize; 2 * seq.n_modes + 2];
    let mut depth = 0;
    for r in &seq.rotations {
        let k = r.axis;
        let layer = last[k - 1].max(last[k]).max(last[k + 1]) + 1;
        last[k] = layer;
        depth = depth.max(layer);
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn template_sizes() {
        assert_eq!(triangular_axes(1).collect::<Vec<_>>(), vec![2]);
        assert_eq!(triangular_axes(2).collect::<Vec<_>>(), vec![2, 3, 4, 2, 3, 2]);
        assert_eq!(triangular_axes(4).count(), 4 * 7);
    }

    #[test]
    fn haar_sequence_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(haar_sequence(1, &mut rng).unwrap().len(), 1);
        assert_eq!(haar_sequence(2, &mut rng).unwrap().len(), 6);
    }

    #[test]
    fn angle_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 2..8 {
            for _ in 0..1000 {
                let t = sample_angle(k, &mut rng).unwrap();
                assert!(t > -PI && t <= PI);
            }
        }
        assert!(sample_angle(1, &mut rng).is_err());
    }

    #[test]
    fn optimal_n1_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            assert!(sample_optimal_circuit(1, &mut rng).unwrap().is_empty());
        }
    }

    #[test]
    fn depth_examples() {
        let seq = GivensSequence::from_rotations(3, &[(2, 0.1), (4, 0.1), (6, 0.1), (3, 0.1)]).unwrap();
        assert_eq!(circuit_depth(&seq), 2);
        let seq = GivensSequence::from_rotations(3, &[(2, 0.1), (3, 0.1), (4, 0.1)]).unwrap();
        assert_eq!(circuit_depth(&seq), 3);
    }
}
