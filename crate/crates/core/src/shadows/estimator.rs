use itertools::Itertools;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::ensembles::{Ensemble, OrthogonalMatrix, SignedPermutation};
use crate::error::{domain, Error, Result};
use crate::majorana::{i_pow, pair_union_expectation, Bitstring, MajoranaMonomial};

/// Largest monomial degree estimated from dense (non-Clifford) samples.
pub const DENSE_DEGREE_CAP: usize = 4;

/// Default constant in the median-of-means sample-size rule.
pub const DEFAULT_SAMPLE_SIZE_CONSTANT: f64 = 34.0;

/// The orthogonal matrix of a sampled circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    Clifford(SignedPermutation),
    Dense(OrthogonalMatrix),
}

impl Transform {
    pub fn n_modes(&self) -> usize {
        match self {
            Transform::Clifford(q) => q.n_modes(),
            Transform::Dense(q) => q.n_modes(),
        }
    }
}

/// A sampled transformation together with the measured bitstring.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowSample {
    pub transform: Transform,
    pub outcome: Bitstring,
    pub ensemble: Ensemble,
}

/// `C(n, k) / C(2n, 2k)`: eigenvalue of the measurement channel on
/// Majorana monomials of degree `2k`.
pub fn lambda_eigenvalue(k: usize, n: usize) -> Result<Ratio<u128>> {
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    Ok(Ratio::new(binomial(n, k)?, binomial(2 * n, 2 * k)?))
}

pub(crate) fn lambda_f64(k: usize, n: usize) -> Result<f64> {
    let r = lambda_eigenvalue(k, n)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

fn binomial(n: usize, k: usize) -> Result<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        // c·(n-i)/(i+1) without overflowing intermediates.
        let num = n as u128 - i;
        let g = c.gcd(&(i + 1));
        let den = (i + 1) / g;
        c = (c / g)
            .checked_mul(num / den)
            .ok_or_else(|| Error::Resource(format!("binomial C({n},{k}) overflows")))?;
    }
    Ok(c)
}

/// Estimate of `tr(γ_μ ρ)` from one shadow:
/// `λ_{k,n}⁻¹ Σ_ν det((Qᵀ)_{μν}) ⟨z|γ_ν|z⟩`, summed over pair unions `ν`.
pub fn single_sample_estimate(s: &ShadowSample, mu: &MajoranaMonomial) -> Result<C64> {
    let n = s.transform.n_modes();
    check_observable(mu, n)?;
    if s.outcome.len() != n {
        return domain("outcome length differs from the mode count");
    }
    let k = mu.degree() / 2;
    let inv_lambda = 1.0 / lambda_f64(k, n)?;
    match &s.transform {
        Transform::Clifford(q) => Ok(clifford_estimate(q, &s.outcome, mu.mask()).map_or(
            C64::new(0.0, 0.0),
            |(sign, phase)| i_pow(phase) * (sign as f64 * inv_lambda),
        )),
        Transform::Dense(q) => {
            if mu.degree() > DENSE_DEGREE_CAP {
                return Err(Error::Resource(format!(
                    "dense estimates are limited to degree {DENSE_DEGREE_CAP}"
                )));
            }
            Ok(dense_overlap(q, &s.outcome, mu.indices()) * inv_lambda)
        }
    }
}

/// Exact Clifford estimate before scaling: `Some((sign, e))` for
/// `sign · i^e`, `None` when the image of `μ` is not a pair union.
pub(crate) fn clifford_estimate(q: &SignedPermutation, z: &Bitstring, mu_mask: u128) -> Option<(i8, u8)> {
    let (nu, sign) = q.transpose().act_on_mask(mu_mask);
    pair_union_expectation(nu, z).map(|e| (sign, e))
}

/// `Σ_ν det(Q_{νμ}) ⟨z|γ_ν|z⟩` over pair unions ν of the same degree.
pub(crate) fn dense_overlap(q: &OrthogonalMatrix, z: &Bitstring, mu: &[usize]) -> C64 {
    let n = q.n_modes();
    let k = mu.len() / 2;
    let mut acc = C64::new(0.0, 0.0);
    for modes in (1..=n).combinations(k) {
        let nu: Vec<usize> = modes.iter().flat_map(|&m| [2 * m - 1, 2 * m]).collect();
        // det((Qᵀ)_{μν}) = det(Q_{νμ}).
        let det = q.minor_unchecked(&nu, mu);
        let phase = modes.iter().map(|&m| 1 + 2 * z.bit(m) as u32).sum::<u32>() % 4;
        acc += i_pow(phase as u8) * det;
    }
    acc
}

fn check_observable(mu: &MajoranaMonomial, n: usize) -> Result<()> {
    if mu.n_modes() != n {
        return domain(format!("observable on {} modes, samples on {n}", mu.n_modes()));
    }
    if mu.degree() % 2 != 0 {
        return domain(format!(
            "odd-degree monomial {{{mu}}} has no unbiased shadow estimator"
        ));
    }
    Ok(())
}

/// Aggregation rule for per-sample estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Mean,
    /// Median of `batches` batch means; the last batch absorbs the remainder.
    MedianOfMeans { batches: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorReport {
    pub observable: String,
    pub estimate: C64,
    pub batches: usize,
    pub batch_means: Vec<C64>,
    pub method: Method,
}

/// Mean or median-of-means of complex values; real and imaginary parts are
/// aggregated separately.
pub fn aggregate(values: &[C64], method: Method, observable: impl Into<String>) -> Result<EstimatorReport> {
    if values.is_empty() {
        return domain("no samples to aggregate");
    }
    let k = match method {
        Method::Mean => 1,
        Method::MedianOfMeans { batches } => batches,
    };
    if k == 0 || k > values.len() {
        return domain(format!("batch count {k} must lie in 1..={}", values.len()));
    }
    let size = values.len() / k;
    let batch_means: Vec<C64> = (0..k)
        .map(|b| {
            let end = if b + 1 == k { values.len() } else { (b + 1) * size };
            let chunk = &values[b * size..end];
            chunk.iter().sum::<C64>() / chunk.len() as f64
        })
        .collect();
    let estimate = if k == 1 {
        batch_means[0]
    } else {
        C64::new(
            median(batch_means.iter().map(|c| c.re).collect()),
            median(batch_means.iter().map(|c| c.im).collect()),
        )
    };
    Ok(EstimatorReport {
        observable: observable.into(),
        estimate,
        batches: k,
        batch_means,
        method,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Per-sample estimates of one observable, in sample order.
pub fn sample_values(samples: &[ShadowSample], mu: &MajoranaMonomial) -> Result<Vec<C64>> {
    samples.par_iter().map(|s| single_sample_estimate(s, mu)).collect()
}

pub fn estimate(samples: &[ShadowSample], mu: &MajoranaMonomial, method: Method) -> Result<EstimatorReport> {
    if samples.is_empty() {
        return domain("no samples to aggregate");
    }
    aggregate(&sample_values(samples, mu)?, method, mu.to_string())
}

/// `C · ε⁻² · ln(M/δ) · var_bound` before rounding up.
pub fn sample_size_bound(epsilon: f64, delta: f64, m: usize, var_bound: f64, constant: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) || m == 0 || !(var_bound > 0.0) || !(constant > 0.0) {
        return domain("sample size needs ε > 0, 0 < δ < 1, M ≥ 1, positive variance and constant");
    }
    Ok(constant * (m as f64 / delta).ln() * var_bound / (epsilon * epsilon))
}

/// Shadows sufficient to estimate `M` observables to accuracy `ε` with
/// failure probability `δ` under median-of-means.
pub fn sample_size(epsilon: f64, delta: f64, m: usize, var_bound: f64, constant: f64) -> Result<u64> {
    Ok(sample_size_bound(epsilon, delta, m, var_bound, constant)?.ceil() as u64)
}
