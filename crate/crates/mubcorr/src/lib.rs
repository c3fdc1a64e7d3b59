//! Classical and genuine-quantum correlation measures of bipartite quantum
//! states.
//!
//! The classical correlation C₁ of a state ρ_AB is the maximal Holevo
//! quantity of the ensemble Alice prepares for Bob by a local projective
//! measurement. The genuine quantum correlations Q₂, Q₃, … are the residual
//! Holevo quantities in bases mutually unbiased to the earlier optimum bases,
//! collected in a correlation vector (C₁, Q₂, …, Q_M). The crate provides
//!
//! - dense complex linear algebra and entropy kernels ([`qmath`]),
//! - constructors for the relevant state families ([`states`]),
//! - local projective measurements and the Holevo quantity ([`measure`]),
//! - mutually unbiased bases and constrained search charts ([`mub`]),
//! - the multi-start optimizer producing correlation vectors, quantum
//!   discord and entropic inequality checks ([`corrvec`]),
//! - closed-form reference values for the worked state families
//!   ([`oracles`]),
//! - randomized verification campaigns ([`verify`]).
//!
//! All entropic quantities are in bits.

pub mod corrvec;
pub mod error;
pub mod measure;
pub mod mub;
pub mod oracles;
pub mod qmath;
pub mod seeding;
pub mod states;
pub mod verify;

pub use corrvec::{
    check_inequality_10, check_inequality_9, check_uncertainty_relation, compute_c1,
    compute_correlation_vector, compute_discord, compute_q_next, compute_symmetric_vector,
    CorrelationVector, InequalityReport, LevelResult, OptimizerConfig, SymmetricCorrelationVector,
};
pub use error::{Error, Result};
pub use measure::{
    classical_mutual_information, holevo, measure_joint, measure_side_a, JointDistribution,
    MeasurementEnsemble, ProjectiveBasis,
};
pub use mub::{chart_mu_to_many, chart_mu_to_one, is_unbiased, standard_mub_family, MubFamily};
pub use oracles::{
    oracle_bell_diagonal, oracle_counterexample, oracle_cq, oracle_pure, oracle_werner,
    OracleResult,
};
pub use qmath::{CMatrix, CVector, ProbabilityVector, C64};
pub use states::{BipartiteState, BlochCorrelationSpec, DensityMatrix, RandomStateKind};
