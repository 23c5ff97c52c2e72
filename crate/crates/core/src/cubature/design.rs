use rayon::prelude::*;

use super::angle::AngleDistribution;
use super::channel::{clifford_tfold_with, ChannelOperator, ChannelVector, MonomialChannel, WordTable};
use super::exact::enumerate_group;
use super::gates::clifford_mixture_3fold;
use crate::ensembles::triangular_axes;
use crate::error::{domain, Error, Result};

/// Largest mode count accepted by [`check_3design`].
pub const DESIGN_MAX_MODES: usize = 2;

/// Outcome of comparing the averaged triangular template against the
/// uniform average over the Clifford subgroup.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    pub n_modes: usize,
    pub group_size: usize,
    pub basis_size: usize,
    pub gate_count: usize,
    pub max_deviation: f64,
}

/// Per-gate factory for [`check_3design_with`]: receives the gate's
/// position in time order and its axis.
pub type GateFactory<'a> = dyn Fn(usize, usize) -> Result<Box<dyn ChannelOperator>> + Sync + 'a;

/// Three-fold channel of the triangular template with every gate replaced
/// by its averaged channel for the `|sin θ|^{k-2}` density, compared on
/// every basis vector against the average over `SO(2n) ∩` signed
/// permutations.
pub fn check_3design(n_modes: usize) -> Result<DesignReport> {
    let table = WordTable::new(n_modes);
    check_3design_with(n_modes, &|_, axis| {
        let p = (axis as f64 - 1.0) / axis as f64;
        Ok(Box::new(clifford_mixture_3fold(&table, n_modes, axis, p)?) as Box<dyn ChannelOperator>)
    })
}

pub fn check_3design_with(n_modes: usize, gate: &GateFactory<'_>) -> Result<DesignReport> {
    if n_modes == 0 {
        return domain("at least one mode is required");
    }
    if n_modes > DESIGN_MAX_MODES {
        return Err(Error::Resource(format!(
            "3-design check is capped at n = {DESIGN_MAX_MODES}, requested n = {n_modes}"
        )));
    }
    let axes: Vec<usize> = triangular_axes(n_modes).collect();
    let gates = axes
        .iter()
        .enumerate()
        .map(|(i, &axis)| gate(i, axis))
        .collect::<Result<Vec<_>>>()?;

    let table = WordTable::new(n_modes);
    let group = enumerate_group(n_modes)?;
    let channels = group
        .iter()
        .map(|q| clifford_tfold_with(&table, q, 3))
        .collect::<Result<Vec<MonomialChannel>>>()?;
    let weight = 1.0 / channels.len() as f64;
    let basis_size = 1usize << (6 * n_modes);

    let max_deviation = (0..basis_size)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            // The circuit channel applies the last gate in time first.
            let mut v = ChannelVector::basis(n_modes, 3, i)?;
            for g in gates.iter().rev() {
                v = g.apply(&v)?;
            }
            let mut avg = ChannelVector::zeros(n_modes, 3)?;
            for ch in &channels {
                let (j, s) = ch.image(i);
                avg.coeffs_mut()[j] += s as f64 * weight;
            }
            Ok(v.max_abs_diff(&avg))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;

    Ok(DesignReport {
        n_modes,
        group_size: group.len(),
        basis_size,
        gate_count: axes.len(),
        max_deviation,
    })
}

/// `Γ = 1 + 4 E[cos² θ sin² θ]`; `Γ > 1` rules out a Clifford 4-cubature
/// of a single rotation with this angle distribution.
pub fn gamma_4fold(dist: &AngleDistribution) -> Result<f64> {
    dist.check_symmetric()?;
    Ok(1.0 + 4.0 * dist.expectation(|t| (t.cos() * t.sin()).powi(2))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::gates::brute_3fold_quadrature;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn single_mode_design() {
        let r = check_3design(1).unwrap();
        assert_eq!(r.group_size, 4);
        assert_eq!(r.basis_size, 64);
        assert!(r.max_deviation < 1e-12, "{r:?}");
    }

    #[test]
    fn asymmetric_gate_breaks_design() {
        let r = check_3design_with(1, &|_, axis| {
            let d = AngleDistribution::density(|t| 1.0 + 0.5 * (t - 0.3).cos());
            Ok(Box::new(brute_3fold_quadrature(1, axis, &d)?) as Box<dyn ChannelOperator>)
        })
        .unwrap();
        assert!(r.max_deviation > 1e-3);
    }

    #[test]
    fn cap() {
        assert!(matches!(check_3design(3), Err(Error::Resource(_))));
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_4fold(&AngleDistribution::Uniform).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(gamma_4fold(&AngleDistribution::clifford_uniform()).unwrap(), 1.0);
        let pts = [FRAC_PI_4, -FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4];
        let d = AngleDistribution::Discrete(pts.iter().map(|&t| (t, 1.0)).collect());
        assert!((gamma_4fold(&d).unwrap() - 2.0).abs() < 1e-12);
        let skew = AngleDistribution::Discrete(vec![(PI / 3.0, 1.0)]);
        assert!(gamma_4fold(&skew).is_err());
    }
}
