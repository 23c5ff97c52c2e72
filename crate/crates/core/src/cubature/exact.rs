use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use crate::ensembles::{canonical_permutation, all_perfect_matchings, random_matching_equivalent, SignedPermutation};
use crate::error::{domain, Error, Result};
use crate::majorana::{i_pow, Bitstring, MajoranaMonomial};
use crate::shadows::{clifford_estimate, lambda_f64};
use crate::state::StateVector;

/// Largest mode count for exact enumeration.
pub const ENUMERATION_MAX_MODES: usize = 3;

/// Number of random replacements per invariance check.
pub const DEFAULT_INVARIANCE_TRIALS: usize = 20;

/// A linear combination `Σ c_μ γ_μ` of Majorana monomials.
pub type Observable = Vec<(MajoranaMonomial, C64)>;

pub fn monomial_observable(mu: MajoranaMonomial) -> Observable {
    vec![(mu, C64::new(1.0, 0.0))]
}

fn check_enumeration_cap(n_modes: usize) -> Result<()> {
    if n_modes == 0 {
        return domain("at least one mode is required");
    }
    if n_modes > ENUMERATION_MAX_MODES {
        return Err(Error::Resource(format!(
            "exact enumeration is capped at n = {ENUMERATION_MAX_MODES}, requested n = {n_modes}"
        )));
    }
    Ok(())
}

/// All signed permutations of `[2n]`, restricted to determinant `+1` unless
/// `include_reflections` is set.
pub fn enumerate_signed_permutations(n_modes: usize, include_reflections: bool) -> Result<Vec<SignedPermutation>> {
    check_enumeration_cap(n_modes)?;
    let m = 2 * n_modes;
    let mut out = Vec::new();
    for perm in (1..=m).permutations(m) {
        for pattern in 0u32..1 << m {
            let signs: Vec<i8> = (0..m).map(|j| if pattern >> j & 1 == 1 { -1 } else { 1 }).collect();
            let q = SignedPermutation::new(perm.clone(), signs)?;
            if include_reflections || q.determinant() == 1 {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// The Clifford elements of `SO(2n)`: signed permutations of determinant
/// `+1`, `2^{2n} (2n)! / 2` of them.
pub fn enumerate_group(n_modes: usize) -> Result<Vec<SignedPermutation>> {
    enumerate_signed_permutations(n_modes, false)
}

/// Weighted finite set of Clifford transformations.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteEnsemble {
    elements: Vec<SignedPermutation>,
    weights: Vec<f64>,
}

impl FiniteEnsemble {
    /// Weights are normalized to sum to one.
    pub fn new(elements: Vec<SignedPermutation>, weights: Vec<f64>) -> Result<Self> {
        if elements.is_empty() || elements.len() != weights.len() {
            return domain("ensemble needs one weight per element and at least one element");
        }
        let n = elements[0].n_modes();
        if elements.iter().any(|q| q.n_modes() != n) {
            return domain("ensemble elements act on different mode counts");
        }
        check_enumeration_cap(n)?;
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0)) || !(total > 0.0) {
            return domain("weights must be nonnegative with positive sum");
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { elements, weights })
    }

    pub fn uniform(elements: Vec<SignedPermutation>) -> Result<Self> {
        let w = vec![1.0; elements.len()];
        Self::new(elements, w)
    }

    pub fn clifford_group(n_modes: usize) -> Result<Self> {
        Self::uniform(enumerate_group(n_modes)?)
    }

    /// One canonical permutation per perfect matching, uniform weights.
    pub fn matching_representatives(n_modes: usize) -> Result<Self> {
        check_enumeration_cap(n_modes)?;
        let elements = all_perfect_matchings(n_modes)
            .iter()
            .map(|m| SignedPermutation::from_permutation(canonical_permutation(m)))
            .collect::<Result<Vec<_>>>()?;
        Self::uniform(elements)
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_modes(&self) -> usize {
        self.elements[0].n_modes()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Same weights, each element replaced by `f(element)`.
    pub fn map(&self, mut f: impl FnMut(&SignedPermutation) -> SignedPermutation) -> Self {
        Self {
            elements: self.elements.iter().map(&mut f).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// `tr(ρ γ_μ)` for every monomial, indexed by bit mask.
pub fn monomial_expectations(state: &StateVector) -> Result<Vec<C64>> {
    let n = state.n_qubits();
    check_enumeration_cap(n)?;
    (0..1u128 << (2 * n))
        .map(|mask| state.majorana_expectation(&MajoranaMonomial::from_mask(n, mask)))
        .collect()
}

/// Outcome distribution after the circuit of `q`, from the expansion
/// `|z⟩⟨z| = 2^{-n} Σ_S ∏_{k∈S} (-i(-1)^{z_k} γ_{2k-1}γ_{2k})` and the
/// adjoint action of `q` on each pair product.
pub fn born_probabilities(q: &SignedPermutation, expectations: &[C64]) -> Result<Vec<f64>> {
    let n = q.n_modes();
    if expectations.len() != 1 << (2 * n) {
        return domain("expectation table does not match the mode count");
    }
    let dim = 1usize << n;
    // Image of each pair product under U†·U, with its sign.
    let images: Vec<C64> = (0..dim)
        .map(|s| {
            let mask = pair_mask(n, s);
            let (image, sign) = q.act_on_mask(mask);
            expectations[image as usize] * sign as f64
        })
        .collect();
    (0..dim)
        .map(|z| {
            let mut acc = C64::new(0.0, 0.0);
            for (s, image) in images.iter().enumerate() {
                // ∏_{k∈S} (-i)(-1)^{z_k}
                let flips = (s & z).count_ones();
                let e = (3 * s.count_ones() + 2 * flips) % 4;
                acc += i_pow(e as u8) * image;
            }
            let p = acc / dim as f64;
            if p.im.abs() > 1e-9 {
                return Err(Error::Internal(format!("outcome probability {p} is not real")));
            }
            Ok(p.re)
        })
        .collect()
}

/// Mask of `γ_{2k-1}γ_{2k}` for the modes `k` in subset `s`, where bit
/// `n-k` of `s` is mode `k` so that `s & z` pairs modes with outcome bits.
fn pair_mask(n: usize, s: usize) -> u128 {
    (1..=n)
        .filter(|&k| s >> (n - k) & 1 == 1)
        .fold(0u128, |m, k| m | 0b11 << (2 * k - 2))
}

struct PreparedObservable {
    terms: Vec<(u128, C64)>,
}

fn prepare(obs: &Observable, n: usize) -> Result<PreparedObservable> {
    let terms = obs
        .iter()
        .map(|(mu, c)| {
            if mu.n_modes() != n {
                return domain("observable and ensemble act on different mode counts");
            }
            if mu.degree() % 2 != 0 {
                return domain(format!("odd-degree monomial {{{mu}}} has no unbiased shadow estimator"));
            }
            Ok((mu.mask(), c / lambda_f64(mu.degree() / 2, n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PreparedObservable { terms })
}

impl PreparedObservable {
    fn estimate(&self, q: &SignedPermutation, z: &Bitstring) -> C64 {
        self.terms
            .iter()
            .filter_map(|&(mask, c)| clifford_estimate(q, z, mask).map(|(s, e)| i_pow(e) * c * s as f64))
            .sum()
    }
}

/// `(E[ô], E|ô|²)` summed exactly over ensemble elements and outcomes.
pub fn exact_moments(ens: &FiniteEnsemble, state: &StateVector, obs: &Observable) -> Result<(C64, f64)> {
    let n = ens.n_modes();
    if state.n_qubits() != n {
        return domain("state and ensemble act on different qubit counts");
    }
    let prepared = prepare(obs, n)?;
    let expectations = monomial_expectations(state)?;
    let outcomes: Vec<Bitstring> = (0..1u64 << n).map(|z| Bitstring::new(n, z)).collect::<Result<_>>()?;
    ens.elements
        .par_iter()
        .zip(&ens.weights)
        .map(|(q, &w)| -> Result<(C64, f64)> {
            let probs = born_probabilities(q, &expectations)?;
            let mut first = C64::new(0.0, 0.0);
            let mut second = 0.0;
            for (z, &p) in outcomes.iter().zip(&probs) {
                let o = prepared.estimate(q, z);
                first += o * p;
                second += o.norm_sqr() * p;
            }
            Ok((first * w, second * w))
        })
        .try_reduce(|| (C64::new(0.0, 0.0), 0.0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

pub fn exact_mean(ens: &FiniteEnsemble, state: &StateVector, obs: &Observable) -> Result<C64> {
    Ok(exact_moments(ens, state, obs)?.0)
}

/// `E|ô|²` over the ensemble and the Born distribution.
pub fn exact_second_moment(ens: &FiniteEnsemble, state: &StateVector, obs: &Observable) -> Result<f64> {
    Ok(exact_moments(ens, state, obs)?.1)
}

/// Measurement channel in the monomial basis:
/// `c_{νμ} = 2^{-n} tr(γ_ν† M(γ_μ))`, rows and columns indexed by mask.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementChannel {
    pub n_modes: usize,
    pub entries: DMatrix<C64>,
}

impl MeasurementChannel {
    /// Largest `|c_{μμ} − λ_{k,n}|` over even-degree `μ` of degree `2k`.
    pub fn eigenvalue_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for mask in 0..self.entries.nrows() {
            let d = mask.count_ones() as usize;
            if d % 2 == 0 {
                let lambda = lambda_f64(d / 2, self.n_modes)?;
                worst = worst.max((self.entries[(mask, mask)] - lambda).norm());
            }
        }
        Ok(worst)
    }

    /// Largest entry off the diagonal or on an odd-degree diagonal entry.
    pub fn off_diagonal_max(&self) -> f64 {
        let dim = self.entries.nrows();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                if r != c || r.count_ones() % 2 == 1 {
                    worst = worst.max(self.entries[(r, c)].norm());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries).iter().fold(0.0, |m, x| m.max(x.norm()))
    }
}

/// The measurement channel `M(A) = E_U Σ_z ⟨z|UAU†|z⟩ U†|z⟩⟨z|U` of a
/// finite ensemble.
pub fn measurement_channel(ens: &FiniteEnsemble) -> Result<MeasurementChannel> {
    let n = ens.n_modes();
    let dim = 1usize << (2 * n);
    let outcomes: Vec<Bitstring> = (0..1u64 << n).map(|z| Bitstring::new(n, z)).collect::<Result<_>>()?;
    let scale = 1.0 / outcomes.len() as f64;
    let entries = ens
        .elements
        .par_iter()
        .zip(&ens.weights)
        .fold(
            || DMatrix::from_element(dim, dim, C64::new(0.0, 0.0)),
            |mut acc, (q, &w)| {
                let surviving: Vec<usize> = (0..dim)
                    .filter(|&m| clifford_estimate(q, &outcomes[0], m as u128).is_some())
                    .collect();
                for z in &outcomes {
                    let vals: Vec<C64> = surviving
                        .iter()
                        .map(|&m| {
                            let (s, e) = clifford_estimate(q, z, m as u128).expect("survival is outcome independent");
                            i_pow(e) * s as f64
                        })
                        .collect();
                    for (a, &nu) in surviving.iter().enumerate() {
                        for (b, &mu) in surviving.iter().enumerate() {
                            acc[(nu, mu)] += vals[b] * vals[a].conj() * (w * scale);
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| DMatrix::from_element(dim, dim, C64::new(0.0, 0.0)), |a, b| a + b);
    Ok(MeasurementChannel { n_modes: n, entries })
}

/// Fraction of the elements of a uniform ensemble under which `γ_μ`
/// survives the measurement, as an exact ratio. For a uniform ensemble this
/// is the diagonal channel entry `c_{μμ}`.
pub fn survival_ratio(elements: &[SignedPermutation], mu: &MajoranaMonomial) -> Result<Ratio<u64>> {
    if elements.is_empty() {
        return domain("empty ensemble");
    }
    let z = Bitstring::zeros(mu.n_modes());
    let count = elements
        .iter()
        .filter(|q| clifford_estimate(q, &z, mu.mask()).is_some())
        .count();
    Ok(Ratio::new(count as u64, elements.len() as u64))
}

/// Largest change of `E|ô|²` over the observables and of the measurement
/// channel entries when every element is replaced.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub trials: usize,
    pub baseline: Vec<f64>,
    pub max_moment_deviation: f64,
    pub max_channel_deviation: f64,
}

/// Deviation for one replacement rule applied once.
pub fn replacement_deviation(
    ens: &FiniteEnsemble,
    state: &StateVector,
    observables: &[Observable],
    replacement: impl FnMut(&SignedPermutation) -> SignedPermutation,
) -> Result<(f64, f64)> {
    let base = second_moments(ens, state, observables)?;
    let replaced = ens.map(replacement);
    let after = second_moments(&replaced, state, observables)?;
    let moment = base.iter().zip(&after).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let channel = measurement_channel(ens)?.max_abs_diff(&measurement_channel(&replaced)?);
    Ok((moment, channel))
}

fn second_moments(ens: &FiniteEnsemble, state: &StateVector, observables: &[Observable]) -> Result<Vec<f64>> {
    observables.iter().map(|o| exact_second_moment(ens, state, o)).collect()
}

fn invariance_trials<R: Rng + ?Sized>(
    ens: &FiniteEnsemble,
    state: &StateVector,
    observables: &[Observable],
    trials: usize,
    rng: &mut R,
    mut replace: impl FnMut(&SignedPermutation, &mut R) -> Result<SignedPermutation>,
) -> Result<InvarianceReport> {
    let baseline = second_moments(ens, state, observables)?;
    let base_channel = measurement_channel(ens)?;
    let mut max_moment_deviation = 0.0f64;
    let mut max_channel_deviation = 0.0f64;
    for _ in 0..trials {
        let elements = ens
            .elements
            .iter()
            .map(|q| replace(q, rng))
            .collect::<Result<Vec<_>>>()?;
        let replaced = FiniteEnsemble {
            elements,
            weights: ens.weights.clone(),
        };
        let moments = second_moments(&replaced, state, observables)?;
        for (a, b) in baseline.iter().zip(&moments) {
            max_moment_deviation = max_moment_deviation.max((a - b).abs());
        }
        max_channel_deviation = max_channel_deviation.max(base_channel.max_abs_diff(&measurement_channel(&replaced)?));
    }
    Ok(InvarianceReport {
        trials,
        baseline,
        max_moment_deviation,
        max_channel_deviation,
    })
}

/// Replaces every element `Q` by `DQ` for a uniformly random sign
/// diagonal `D`, `trials` times.
pub fn check_sign_invariance<R: Rng + ?Sized>(
    ens: &FiniteEnsemble,
    state: &StateVector,
    observables: &[Observable],
    trials: usize,
    rng: &mut R,
) -> Result<InvarianceReport> {
    invariance_trials(ens, state, observables, trials, rng, |q, rng| {
        let signs = q
            .signs()
            .iter()
            .map(|&s| if rng.random_bool(0.5) { -s } else { s })
            .collect();
        q.with_signs(signs)
    })
}

/// Replaces the permutation of every element by a uniformly random one
/// with the same perfect matching, keeping the signs, `trials` times.
pub fn check_matching_invariance<R: Rng + ?Sized>(
    ens: &FiniteEnsemble,
    state: &StateVector,
    observables: &[Observable],
    trials: usize,
    rng: &mut R,
) -> Result<InvarianceReport> {
    invariance_trials(ens, state, observables, trials, rng, |q, rng| {
        SignedPermutation::new(random_matching_equivalent(q.perm(), rng), q.signs().to_vec())
    })
}

/// Swaps the second and third entries of the permutation, which changes
/// its perfect matching. Requires at least two modes.
pub fn matching_changing_replacement(q: &SignedPermutation) -> Result<SignedPermutation> {
    if q.n_modes() < 2 {
        return domain("a single mode has only one perfect matching");
    }
    let mut p = q.perm().to_vec();
    p.swap(1, 2);
    SignedPermutation::new(p, q.signs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(1).unwrap().len(), 4);
        assert_eq!(enumerate_group(2).unwrap().len(), 192);
        assert_eq!(enumerate_signed_permutations(2, true).unwrap().len(), 384);
        assert!(matches!(enumerate_group(4), Err(Error::Resource(_))));
    }

    #[test]
    fn born_probabilities_of_identity_match_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random_haar(2, &mut rng).unwrap();
        let ex = monomial_expectations(&psi).unwrap();
        let p = born_probabilities(&SignedPermutation::identity(2), &ex).unwrap();
        for (a, b) in p.iter().zip(psi.probabilities()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_second_moment() {
        // |0…0⟩ under the identity: ⟨γ_1γ_2⟩ = i, so |ô|² = λ⁻².
        for n in 1..=3 {
            let ens = FiniteEnsemble::uniform(vec![SignedPermutation::identity(n)]).unwrap();
            let state = StateVector::basis(Bitstring::zeros(n)).unwrap();
            let mu = MajoranaMonomial::new(n, vec![1, 2]).unwrap();
            let m2 = exact_second_moment(&ens, &state, &monomial_observable(mu)).unwrap();
            let lambda = lambda_f64(1, n).unwrap();
            assert!((m2 - lambda.powi(-2)).abs() < 1e-10);
        }
    }

    #[test]
    fn group_channel_n2() {
        let ens = FiniteEnsemble::clifford_group(2).unwrap();
        let ch = measurement_channel(&ens).unwrap();
        assert!(ch.eigenvalue_deviation().unwrap() < 1e-12);
        assert!(ch.off_diagonal_max() < 1e-12);
    }

    #[test]
    fn matching_change_detected() {
        let ens = FiniteEnsemble::uniform(vec![SignedPermutation::identity(2)]).unwrap();
        let state = StateVector::basis(Bitstring::zeros(2)).unwrap();
        let obs = vec![monomial_observable(MajoranaMonomial::new(2, vec![1, 2]).unwrap())];
        let (dev, _) =
            replacement_deviation(&ens, &state, &obs, |q| matching_changing_replacement(q).unwrap()).unwrap();
        assert!(dev > 1.0);
    }
}
