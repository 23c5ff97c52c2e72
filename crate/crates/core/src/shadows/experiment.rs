use itertools::Itertools;
use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use super::collect::{collect_shadows, sample_rng};
use super::estimator::single_sample_estimate;
use crate::ensembles::Ensemble;
use crate::error::{domain, Result};
use crate::majorana::MajoranaMonomial;
use crate::state::StateVector;

/// Settings for the error-versus-shots experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub state: StateVector,
    pub ensembles: Vec<Ensemble>,
    /// Shot counts; shadows for the largest are drawn once and prefixes reused.
    pub grid: Vec<usize>,
    pub bootstrap: usize,
    pub seed: u64,
    pub observables: Vec<MajoranaMonomial>,
}

/// One `(ensemble, N)` row of the experiment table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub ensemble: Ensemble,
    pub shots: usize,
    pub mean_abs_error: f64,
    pub std_abs_error: f64,
    pub bootstrap_size: usize,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "ensemble,N,mean_abs_error,std_abs_error,bootstrap_size,seed";

/// Every `γ_p γ_q` with `p < q`.
pub fn degree_two_observables(n_modes: usize) -> Vec<MajoranaMonomial> {
    (1..=2 * n_modes)
        .tuple_combinations()
        .map(|(p, q)| MajoranaMonomial::new(n_modes, vec![p, q]).expect("valid pair"))
        .collect()
}

fn mix(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over a combined word
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// For each ensemble and each `N` in the grid: bootstrap replicates resample
/// `N` of the first `N` shadows with replacement; each replicate scores the
/// mean over observables of `|ô − tr(γ_μ ρ)|`. Rows report the mean and
/// standard deviation of that score over replicates.
pub fn variance_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.grid.is_empty() || cfg.grid.contains(&0) {
        return domain("shot grid must be nonempty with positive entries");
    }
    if cfg.bootstrap == 0 {
        return domain("bootstrap size must be positive");
    }
    if cfg.observables.is_empty() {
        return domain("no observables given");
    }
    let exact: Vec<C64> = cfg
        .observables
        .iter()
        .map(|m| cfg.state.majorana_expectation(m))
        .collect::<Result<_>>()?;
    let n_obs = cfg.observables.len();
    let n_max = *cfg.grid.iter().max().expect("nonempty grid");

    let mut rows = Vec::new();
    for (e_idx, &ensemble) in cfg.ensembles.iter().enumerate() {
        let shadows = collect_shadows(&cfg.state, ensemble, n_max, mix(cfg.seed, e_idx as u64 + 1))?;
        // Row-major table: sample i, observable j at i * n_obs + j.
        let table: Vec<C64> = shadows
            .par_iter()
            .map(|s| {
                cfg.observables
                    .iter()
                    .map(|m| single_sample_estimate(s, m))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();

        for (g_idx, &shots) in cfg.grid.iter().enumerate() {
            let stream_seed = mix(mix(cfg.seed, e_idx as u64 + 1), g_idx as u64 + 1);
            let scores: Vec<f64> = (0..cfg.bootstrap)
                .into_par_iter()
                .map(|r| {
                    let mut rng = sample_rng(stream_seed, r as u64);
                    let mut sums = vec![C64::new(0.0, 0.0); n_obs];
                    for _ in 0..shots {
                        let i = rng.random_range(0..shots);
                        let row = &table[i * n_obs..(i + 1) * n_obs];
                        for (s, v) in sums.iter_mut().zip(row) {
                            *s += v;
                        }
                    }
                    sums.iter()
                        .zip(&exact)
                        .map(|(s, o)| (s / shots as f64 - o).norm())
                        .sum::<f64>()
                        / n_obs as f64
                })
                .collect();
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            let var = if scores.len() > 1 {
                scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (scores.len() - 1) as f64
            } else {
                0.0
            };
            rows.push(ExperimentRow {
                ensemble,
                shots,
                mean_abs_error: mean,
                std_abs_error: var.sqrt(),
                bootstrap_size: cfg.bootstrap,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}

/// CSV table with 17 significant digits per float.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.16e},{:.16e},{},{}\n",
            r.ensemble, r.shots, r.mean_abs_error, r.std_abs_error, r.bootstrap_size, r.seed
        ));
    }
    out
}
