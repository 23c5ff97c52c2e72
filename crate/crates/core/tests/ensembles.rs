mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::*;
use matchgate_shadows::ensembles::*;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn dense_circuit(seq: &GivensSequence) -> DMatrix<C64> {
    let n = seq.n_modes;
    let mut u = identity(n);
    for r in &seq.rotations {
        u = givens_unitary(r.axis, r.angle, n) * u;
    }
    if seq.terminal_reflection {
        let word: String = (1..=n).map(|j| if j == n { 'X' } else { 'I' }).collect();
        u = kron_word(&word) * u;
    }
    u
}

/// `U† γ_k U = Σ_l Q_kl γ_l` checked entrywise against the dense unitary.
fn assert_adjoint_action(seq: &GivensSequence, q: &OrthogonalMatrix) {
    let n = seq.n_modes;
    let u = dense_circuit(seq);
    for k in 1..=2 * n {
        let lhs = u.adjoint() * jw(k, n) * &u;
        let mut rhs = identity(n) * c(0.0, 0.0);
        for l in 1..=2 * n {
            rhs += jw(l, n) * c(q.entry(k, l), 0.0);
        }
        assert!(max_abs(&(lhs - rhs)) < 1e-10, "row {k}");
    }
}

#[test]
fn givens_matrix_is_the_adjoint_action_of_the_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for axis in 2..=2 * n {
            let theta = rng.random_range(-PI..PI);
            let seq = GivensSequence::from_rotations(n, &[(axis, theta)]).unwrap();
            assert_adjoint_action(&seq, &compose_to_matrix(&seq));
        }
    }
}

#[test]
fn composed_matrix_is_the_adjoint_action_of_the_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=3 {
        for _ in 0..5 {
            let seq = add_random_reflection(haar_sequence(n, &mut rng).unwrap(), &mut rng);
            let q = compose_to_matrix(&seq);
            assert!(q.orthogonality_defect() < 1e-10);
            let det = if seq.terminal_reflection { -1.0 } else { 1.0 };
            assert!((q.determinant() - det).abs() < 1e-10);
            assert_adjoint_action(&seq, &q);
        }
    }
}

#[test]
fn signed_permutation_matches_dense_matrix_on_clifford_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=4 {
        for mode in [CliffordMode::FourAngle, CliffordMode::TwoAngle] {
            for _ in 0..20 {
                let seq = add_random_reflection(clifford_sequence(n, &mut rng, mode).unwrap(), &mut rng);
                let sp = signed_permutation_of(&seq).unwrap();
                let dense = compose_to_matrix(&seq);
                assert!((sp.to_matrix().matrix() - dense.matrix()).abs().max() < 1e-12);
            }
        }
    }
    let seq = GivensSequence::from_rotations(2, &[(3, 0.3)]).unwrap();
    assert!(signed_permutation_of(&seq).is_err());
}

#[test]
fn composition_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let a = clifford_sequence(3, &mut rng, CliffordMode::FourAngle).unwrap();
        let b = clifford_sequence(3, &mut rng, CliffordMode::FourAngle).unwrap();
        let ab = a.then(&b).unwrap();
        // b runs after a, so Q(ab) = Q(b)·Q(a).
        let expected = signed_permutation_of(&b).unwrap().compose(&signed_permutation_of(&a).unwrap());
        assert_eq!(signed_permutation_of(&ab).unwrap(), expected);
        let dense = compose_to_matrix(&b).mul(&compose_to_matrix(&a));
        assert!((compose_to_matrix(&ab).matrix() - dense.matrix()).abs().max() < 1e-12);
    }
}

/// Pearson statistic with its upper-tail p-value.
fn chi_square(observed: &[usize], expected_prob: &[f64]) -> f64 {
    let total: usize = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected_prob)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Bin probabilities of `|sin θ|^{k-2}` on `(-π, π]` by Simpson's rule.
fn sin_power_bins(k: usize, bins: usize) -> Vec<f64> {
    let w = |t: f64| t.sin().abs().powi(k as i32 - 2);
    let width = 2.0 * PI / bins as f64;
    let simpson = |a: f64, b: f64| {
        let m = 200;
        let h = (b - a) / m as f64;
        (0..=m)
            .map(|i| {
                let c = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                c * w(a + i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    };
    let raw: Vec<f64> = (0..bins).map(|b| simpson(-PI + b as f64 * width, -PI + (b + 1) as f64 * width)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[test]
fn angle_sampler_follows_sin_power_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let bins = 24;
    for k in 2..=8 {
        let mut counts = vec![0usize; bins];
        for _ in 0..60_000 {
            let t = sample_angle(k, &mut rng).unwrap();
            assert!(t > -PI && t <= PI);
            let b = (((t + PI) / (2.0 * PI)) * bins as f64).floor() as usize;
            counts[b.min(bins - 1)] += 1;
        }
        let p = chi_square(&counts, &sin_power_bins(k, bins));
        assert!(p > 1e-4, "k={k} p={p}");
    }
}

#[test]
fn clifford_angle_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let index = |t: f64| [0.0, PI, FRAC_PI_2, -FRAC_PI_2].iter().position(|&a| a == t).unwrap();
    for k in [2usize, 3, 6] {
        let kf = k as f64;
        let mut four = vec![0usize; 4];
        let mut two = vec![0usize; 4];
        for _ in 0..40_000 {
            four[index(sample_clifford_angle(k, CliffordMode::FourAngle, &mut rng))] += 1;
            two[index(sample_clifford_angle(k, CliffordMode::TwoAngle, &mut rng))] += 1;
        }
        let p4 = [1.0 / (2.0 * kf), 1.0 / (2.0 * kf), (kf - 1.0) / (2.0 * kf), (kf - 1.0) / (2.0 * kf)];
        assert!(chi_square(&four, &p4) > 1e-4);
        assert_eq!((two[1], two[3]), (0, 0));
        assert!(chi_square(&[two[0], two[2]], &[1.0 / kf, (kf - 1.0) / kf]) > 1e-4);
    }
}

#[test]
fn optimal_circuits_have_one_gate_per_inversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=6 {
        for _ in 0..500 {
            let seq = sample_optimal_circuit(n, &mut rng).unwrap();
            let q = signed_permutation_of(&seq).unwrap();
            assert_eq!(seq.len(), inversion_count(q.perm()));
            assert!(circuit_depth(&seq) <= 2 * n);
            let m = perfect_matching_of(q.perm()).unwrap();
            assert_eq!(canonical_permutation(&m), q.perm());
        }
    }
}

#[test]
fn optimal_matchings_are_uniform_at_two_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let matchings = all_perfect_matchings(2);
    let mut counts = vec![0usize; matchings.len()];
    for _ in 0..30_000 {
        let seq = sample_optimal_circuit(2, &mut rng).unwrap();
        let q = signed_permutation_of(&seq).unwrap();
        let m = perfect_matching_of(q.perm()).unwrap();
        counts[matchings.iter().position(|x| *x == m).unwrap()] += 1;
    }
    assert!(chi_square(&counts, &[1.0 / 3.0; 3]) > 1e-4);
}

#[test]
fn matching_counts_are_double_factorials() {
    for (n, count) in [(1, 1), (2, 3), (3, 15), (4, 105)] {
        let all = all_perfect_matchings(n);
        assert_eq!(all.len(), count);
        let canon: std::collections::BTreeSet<_> = all.iter().map(canonical_permutation).collect();
        assert_eq!(canon.len(), count);
    }
}

#[test]
fn circuit_record_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let seq = add_random_reflection(clifford_sequence(3, &mut rng, CliffordMode::FourAngle).unwrap(), &mut rng);
    let rec = CircuitRecord::from_sequence(&seq, true);
    let back = CircuitRecord::from_json(&rec.to_json()).unwrap().to_sequence().unwrap();
    assert_eq!(back, seq);
    let mut bad = rec.clone();
    if let Some(sp) = bad.signed_permutation.as_mut() {
        sp.signs[0] = -sp.signs[0];
    }
    assert!(bad.to_sequence().is_err());
    assert!(CircuitRecord::from_json("{not json").is_err());
}

fn permutation_strategy(max_size: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_size / 2).prop_flat_map(|half| Just((1..=2 * half).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #[test]
    fn bubblesort_reproduces_permutation(p in permutation_strategy(12)) {
        let axes = bubblesort_transpositions(&p).unwrap();
        prop_assert_eq!(axes.len(), inversion_count(&p));
        prop_assert_eq!(apply_transpositions(&axes, p.len()).unwrap(), p.clone());
        let tri = TriangularCircuit::from_transpositions(p.len(), &axes).unwrap();
        prop_assert_eq!(tri.permutation(), p);
    }

    #[test]
    fn brickwall_synthesis_is_optimal(p in permutation_strategy(12)) {
        let b = BrickWallCircuit::for_permutation(&p).unwrap();
        prop_assert_eq!(b.permutation(), p.clone());
        prop_assert_eq!(b.gate_count(), inversion_count(&p));
        prop_assert!(b.depth() <= p.len());
    }

    #[test]
    fn brickwall_rewrite_preserves_permutation(half in 1usize..=5, seed in any::<u64>()) {
        let size = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<bool>> = (1..size).map(|l| (0..size - l).map(|_| rng.random_bool(0.5)).collect()).collect();
        let tri = TriangularCircuit::from_rows(size, rows).unwrap();
        let b = brickwall_transform(&tri);
        prop_assert_eq!(b.permutation(), tri.permutation());
        prop_assert!(b.gate_count() <= tri.gate_count());
    }

    #[test]
    fn matching_equivalents_share_the_matching(p in permutation_strategy(10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_matching_equivalent(&p, &mut rng);
        prop_assert_eq!(perfect_matching_of(&q).unwrap(), perfect_matching_of(&p).unwrap());
    }

    #[test]
    fn signed_permutation_transpose_is_inverse(p in permutation_strategy(8), signs in prop::collection::vec(prop::bool::ANY, 8)) {
        let s: Vec<i8> = signs[..p.len()].iter().map(|&b| if b { -1 } else { 1 }).collect();
        let q = SignedPermutation::new(p.clone(), s).unwrap();
        prop_assert_eq!(q.compose(&q.transpose()), SignedPermutation::identity(p.len() / 2));
        let m = q.to_matrix();
        prop_assert!((m.determinant() - q.determinant() as f64).abs() < 1e-12);
    }
}

#[test]
fn braid_relation_holds_on_three_wires() {
    let t1t2t1 = apply_transpositions(&[2, 3, 2], 3).unwrap();
    let t2t1t2 = apply_transpositions(&[3, 2, 3], 3).unwrap();
    assert_eq!(t1t2t1, t2t1t2);
    for code in 0..8u8 {
        let b = (code & 1 != 0, code & 2 != 0, code & 4 != 0);
        let c = braid_rewrite(b.0, b.1, b.2);
        let pick = |bits: [(bool, usize); 3]| -> Vec<usize> { bits.iter().filter(|x| x.0).map(|x| x.1).collect() };
        let lhs = apply_transpositions(&pick([(b.0, 2), (b.1, 3), (b.2, 2)]), 3).unwrap();
        let rhs = apply_transpositions(&pick([(c.0, 3), (c.1, 2), (c.2, 3)]), 3).unwrap();
        assert_eq!(lhs, rhs);
        assert!(c.0 as u8 + c.1 as u8 + c.2 as u8 <= b.0 as u8 + b.1 as u8 + b.2 as u8);
    }
}

#[test]
fn permutation_shuffles_have_expected_inversions() {
    // E[inv] over uniform permutations of m letters is m(m-1)/4.
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let m = 8;
    let trials = 20_000;
    let mut total = 0usize;
    let mut p: Vec<usize> = (1..=m).collect();
    for _ in 0..trials {
        p.shuffle(&mut rng);
        total += inversion_count(&p);
    }
    let mean = total as f64 / trials as f64;
    assert!((mean - (m * (m - 1)) as f64 / 4.0).abs() < 0.15);
}
