use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use matchgate_shadows::cubature::{
    check_3design, check_matching_invariance, check_sign_invariance, gamma_4fold, survival_ratio, AngleDistribution,
    FiniteEnsemble, InvarianceReport, Observable,
};
use matchgate_shadows::ensembles::{all_perfect_matchings, canonical_permutation, Ensemble, SignedPermutation};
use matchgate_shadows::majorana::{Bitstring, MajoranaMonomial};
use matchgate_shadows::shadows::{
    collect_shadows, degree_two_observables, estimate as estimate_one, lambda_eigenvalue, rows_to_csv, sample_rng,
    variance_experiment, ExperimentConfig, Method,
};
use matchgate_shadows::state::StateVector;
use matchgate_shadows::{Error, Result};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde_json::json;

use crate::observables::read_observables;
use crate::{BenchArgs, Check, EstimateArgs, MethodArg, SampleArgs, VerifyArgs};

/// Largest mode count for `verify --check lambda`.
const LAMBDA_MAX_MODES: usize = 6;

pub enum CliError {
    Lib(Error),
    VerificationFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) => 2,
        Error::Data(_) | Error::Io(_) | Error::Json(_) => 3,
        Error::Resource(_) => 4,
        Error::Numeric(_) | Error::Internal(_) => 1,
    }
}

fn open_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn sample(a: &SampleArgs) -> std::result::Result<(), CliError> {
    let records = (0..a.shots)
        .map(|i| {
            let mut rng = sample_rng(a.seed, i as u64);
            let seq = a.ensemble.sample(a.n, &mut rng)?;
            Ok(matchgate_shadows::ensembles::CircuitRecord::from_sequence(&seq, a.ensemble == Ensemble::Optimal))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = open_output(a.out.as_deref())?;
    for r in records {
        writeln!(w, "{}", r.to_json())?;
    }
    w.flush()?;
    Ok(())
}

fn load_state(path: Option<&Path>, n: Option<usize>) -> Result<StateVector> {
    match (path, n) {
        (Some(p), n) => {
            let psi = StateVector::from_file(p)?;
            if let Some(n) = n.filter(|&n| n != psi.n_qubits()) {
                return Err(Error::Domain(format!(
                    "--n {n} disagrees with the {}-qubit state file",
                    psi.n_qubits()
                )));
            }
            Ok(psi)
        }
        (None, Some(n)) => StateVector::basis(Bitstring::zeros(n)),
        (None, None) => Err(Error::Domain("either --state-file or --n is required".into())),
    }
}

pub fn estimate(a: &EstimateArgs) -> std::result::Result<(), CliError> {
    let psi = load_state(a.state_file.as_deref(), a.n)?;
    let observables = read_observables(&a.observables, psi.n_qubits())?;
    if a.shots == 0 {
        return Err(Error::Domain("estimation needs at least one shot".into()).into());
    }
    let method = match a.method {
        MethodArg::Mean => Method::Mean,
        MethodArg::MedianOfMeans => Method::MedianOfMeans { batches: a.batches },
    };
    let samples = collect_shadows(&psi, a.ensemble, a.shots, a.seed)?;
    let mut w = open_output(a.out.as_deref())?;
    writeln!(w, "observable,re,im,method,batches,shots,ensemble,seed")?;
    for m in &observables {
        let r = estimate_one(&samples, m, method)?;
        let method_name = match method {
            Method::Mean => "mean",
            Method::MedianOfMeans { .. } => "median_of_means",
        };
        writeln!(
            w,
            "{},{:.16e},{:.16e},{},{},{},{},{}",
            r.observable, r.estimate.re, r.estimate.im, method_name, r.batches, a.shots, a.ensemble, a.seed
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench(a: &BenchArgs) -> std::result::Result<(), CliError> {
    let state = match &a.state_file {
        Some(p) => load_state(Some(p), Some(a.n))?,
        None => StateVector::random_haar(a.n, &mut sample_rng(a.seed, u64::MAX))?,
    };
    if a.ensembles.is_empty() {
        return Err(Error::Domain("at least one ensemble is required".into()).into());
    }
    let cfg = ExperimentConfig {
        state,
        ensembles: a.ensembles.clone(),
        grid: a.grid.clone(),
        bootstrap: a.bootstrap,
        seed: a.seed,
        observables: degree_two_observables(a.n),
    };
    let rows = variance_experiment(&cfg)?;
    let mut w = open_output(a.out.as_deref())?;
    w.write_all(rows_to_csv(&rows).as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Degree-two monomials plus random Hermitian combinations of them.
fn invariance_observables<R: Rng>(n: usize, rng: &mut R) -> Vec<Observable> {
    let mut obs: Vec<Observable> = degree_two_observables(n)
        .into_iter()
        .map(|m| vec![(m, C64::new(1.0, 0.0))])
        .collect();
    for _ in 0..3 {
        obs.push(
            degree_two_observables(n)
                .into_iter()
                .map(|m| (m, C64::new(0.0, rng.random_range(-1.0..1.0))))
                .collect(),
        );
    }
    obs
}

fn invariance_json(check: &str, n: usize, r: &InvarianceReport, tol: f64, group_size: usize) -> serde_json::Value {
    let dev = r.max_moment_deviation.max(r.max_channel_deviation);
    json!({
        "check": check,
        "n": n,
        "max_deviation": dev,
        "pass": dev < tol,
        "trials": r.trials,
        "ensemble_size": group_size,
        "max_moment_deviation": r.max_moment_deviation,
        "max_channel_deviation": r.max_channel_deviation,
    })
}

fn lambda_report(n: usize, tol: f64) -> Result<serde_json::Value> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if n > LAMBDA_MAX_MODES {
        return Err(Error::Resource(format!(
            "the eigenvalue check enumerates perfect matchings and is capped at n = {LAMBDA_MAX_MODES}"
        )));
    }
    // Uniform average over one permutation per perfect matching.
    let reps = all_perfect_matchings(n)
        .iter()
        .map(|m| SignedPermutation::from_permutation(canonical_permutation(m)))
        .collect::<Result<Vec<_>>>()?;
    let mut max_deviation = 0.0f64;
    for mask in (0..1u128 << (2 * n)).filter(|m| m.count_ones() % 2 == 0) {
        let mu = MajoranaMonomial::from_mask(n, mask);
        let r = survival_ratio(&reps, &mu)?;
        let l = lambda_eigenvalue(mu.degree() / 2, n)?;
        let rf = *r.numer() as f64 / *r.denom() as f64;
        let lf = *l.numer() as f64 / *l.denom() as f64;
        max_deviation = max_deviation.max((rf - lf).abs());
    }
    let table = (0..=n)
        .map(|k| {
            let l = lambda_eigenvalue(k, n)?;
            Ok(json!({
                "k": k,
                "lambda": format!("{}/{}", l.numer(), l.denom()),
                "value": *l.numer() as f64 / *l.denom() as f64,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "check": "lambda",
        "n": n,
        "max_deviation": max_deviation,
        "pass": max_deviation < tol,
        "ensemble_size": reps.len(),
        "table": table,
    }))
}

pub fn verify(a: &VerifyArgs) -> std::result::Result<(), CliError> {
    let report = match a.check {
        Check::Design3 => {
            let tol = a.tol.unwrap_or(1e-9);
            let r = check_3design(a.n)?;
            json!({
                "check": "design3",
                "n": a.n,
                "max_deviation": r.max_deviation,
                "pass": r.max_deviation < tol,
                "group_size": r.group_size,
                "basis_size": r.basis_size,
            })
        }
        Check::Gamma4 => {
            let tol = a.tol.unwrap_or(1e-9);
            let gamma = gamma_4fold(&AngleDistribution::Uniform)?;
            let deviation = (gamma - 1.5).abs();
            json!({
                "check": "gamma4",
                "n": 1,
                "gamma": gamma,
                "max_deviation": deviation,
                "pass": deviation < tol && gamma > 1.0,
            })
        }
        Check::SignInvariance | Check::MatchingInvariance => {
            let tol = a.tol.unwrap_or(1e-10);
            let ens = FiniteEnsemble::clifford_group(a.n)?;
            let mut rng = sample_rng(a.seed, 0);
            let psi = StateVector::random_haar(a.n, &mut rng)?;
            let obs = invariance_observables(a.n, &mut rng);
            if a.check == Check::SignInvariance {
                let r = check_sign_invariance(&ens, &psi, &obs, a.trials, &mut rng)?;
                invariance_json("sign-invariance", a.n, &r, tol, ens.len())
            } else {
                let r = check_matching_invariance(&ens, &psi, &obs, a.trials, &mut rng)?;
                invariance_json("matching-invariance", a.n, &r, tol, ens.len())
            }
        }
        Check::Lambda => lambda_report(a.n, a.tol.unwrap_or(1e-12))?,
    };
    let mut w = open_output(a.out.as_deref())?;
    writeln!(w, "{report}")?;
    w.flush()?;
    if report["pass"].as_bool() == Some(true) {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}
