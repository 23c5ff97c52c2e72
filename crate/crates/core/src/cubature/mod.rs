//! Exact checks of the moment identities behind the Clifford shadow
//! ensembles: t-fold channels, averaged rotations, the 3-design property and
//! enumeration over finite Clifford ensembles.

mod angle;
mod channel;
mod design;
mod exact;
mod gates;

pub use angle::{AngleDistribution, QUADRATURE_TARGET, SYMMETRY_TOL};
pub use channel::{clifford_tfold, ChannelOperator, ChannelVector, CliffordInput, MonomialChannel, CHANNEL_WORD_CAP};
pub use design::{check_3design, check_3design_with, gamma_4fold, DesignReport, GateFactory, DESIGN_MAX_MODES};
pub use exact::{
    born_probabilities, check_matching_invariance, check_sign_invariance, enumerate_group,
    enumerate_signed_permutations, exact_mean, exact_moments, exact_second_moment, matching_changing_replacement,
    measurement_channel, monomial_expectations, monomial_observable, replacement_deviation, survival_ratio,
    FiniteEnsemble, InvarianceReport, MeasurementChannel, Observable, DEFAULT_INVARIANCE_TRIALS,
    ENUMERATION_MAX_MODES,
};
pub use gates::{averaged_gate_3fold, brute_3fold_quadrature, brute_tfold_quadrature, CliffordMixture, QuadratureGate};
