//! Classical-shadow collection, estimators and the error-versus-shots
//! experiment.

mod collect;
mod estimator;
mod experiment;
mod rdm;

pub use collect::{collect_shadows, sample_rng, MAX_SHADOW_QUBITS};
pub use estimator::{
    aggregate, estimate, lambda_eigenvalue, sample_size, sample_size_bound, sample_values,
    single_sample_estimate, EstimatorReport, Method, ShadowSample, Transform, DEFAULT_SAMPLE_SIZE_CONSTANT,
    DENSE_DEGREE_CAP,
};
pub use experiment::{
    degree_two_observables, rows_to_csv, variance_experiment, ExperimentConfig, ExperimentRow, CSV_HEADER,
};
pub use rdm::{estimate_rdm, RdmEstimate, RdmIndex};

pub(crate) use estimator::{clifford_estimate, lambda_f64};
