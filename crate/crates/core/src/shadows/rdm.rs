use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_complex::Complex64 as C64;

use super::estimator::{aggregate, sample_values, EstimatorReport, Method, ShadowSample};
use crate::error::{domain, Result};
use crate::majorana::{rdm_expansion, MajoranaMonomial};

/// Index of an RDM entry: creation modes `p`, annihilation modes `q`.
pub type RdmIndex = (Vec<usize>, Vec<usize>);

/// Estimated `k`-RDM `D^{p_1…p_k}_{q_1…q_k} = tr(a†_{p_1}…a†_{p_k} a_{q_1}…a_{q_k} ρ)`.
#[derive(Clone, Debug)]
pub struct RdmEstimate {
    pub k: usize,
    pub n_modes: usize,
    pub entries: BTreeMap<RdmIndex, EstimatorReport>,
}

impl RdmEstimate {
    pub fn get(&self, p: &[usize], q: &[usize]) -> Option<C64> {
        self.entries.get(&(p.to_vec(), q.to_vec())).map(|r| r.estimate)
    }

    /// Entries flattened to an `n^k × n^k` matrix; row index from `p`,
    /// column index from `q`, first mode most significant.
    pub fn matrix(&self) -> nalgebra::DMatrix<C64> {
        let dim = self.n_modes.pow(self.k as u32);
        let flat = |v: &[usize]| v.iter().fold(0, |acc, &m| acc * self.n_modes + m - 1);
        let mut out = nalgebra::DMatrix::zeros(dim, dim);
        for ((p, q), r) in &self.entries {
            out[(flat(p), flat(q))] = r.estimate;
        }
        out
    }
}

/// Estimates every entry of the `k`-RDM by linearity over Majorana
/// monomials, then enforces Hermiticity sample by sample:
/// `D^{p}_{q} ← (D^{p}_{q} + conj(D^{rev q}_{rev p}))/2`.
pub fn estimate_rdm(samples: &[ShadowSample], k: usize, method: Method) -> Result<RdmEstimate> {
    if !(1..=2).contains(&k) {
        return domain(format!("only 1- and 2-RDMs are supported, requested k = {k}"));
    }
    let Some(first) = samples.first() else {
        return domain("no samples to aggregate");
    };
    let n = first.transform.n_modes();
    let tuples: Vec<Vec<usize>> = (0..k).map(|_| 1..=n).multi_cartesian_product().collect();

    let mut cache: HashMap<MajoranaMonomial, Vec<C64>> = HashMap::new();
    let mut raw: HashMap<RdmIndex, Vec<C64>> = HashMap::new();
    for p in &tuples {
        for q in &tuples {
            let combo = rdm_expansion(p, q, n)?;
            let mut values = vec![C64::new(0.0, 0.0); samples.len()];
            for (m, c) in combo.terms() {
                if !cache.contains_key(m) {
                    let v = if m.degree() == 0 {
                        vec![C64::new(1.0, 0.0); samples.len()]
                    } else {
                        sample_values(samples, m)?
                    };
                    cache.insert(m.clone(), v);
                }
                for (acc, v) in values.iter_mut().zip(&cache[m]) {
                    *acc += c * v;
                }
            }
            raw.insert((p.clone(), q.clone()), values);
        }
    }

    let mut entries = BTreeMap::new();
    for ((p, q), values) in &raw {
        let rev = |v: &Vec<usize>| v.iter().rev().copied().collect::<Vec<_>>();
        let partner = &raw[&(rev(q), rev(p))];
        let sym: Vec<C64> = values.iter().zip(partner).map(|(a, b)| (a + b.conj()) * 0.5).collect();
        let label = format!("D{:?}{:?}", p, q);
        entries.insert((p.clone(), q.clone()), aggregate(&sym, method, label)?);
    }
    Ok(RdmEstimate { k, n_modes: n, entries })
}
