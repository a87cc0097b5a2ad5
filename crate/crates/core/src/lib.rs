//! Homogeneous antiautomorphisms and involutions of graded upper
//! triangular matrix algebras.
//!
//! For an elementary G-grading on UT_n, given by the (n-1)-tuple of
//! degrees of the superdiagonal matrix units, this crate decides whether
//! a homogeneous antiautomorphism exists, constructs the support
//! permutation θ when it does, classifies θ (graded, degree-inverting,
//! or other), and verifies every decision against an independent
//! brute-force oracle working in exact matrix arithmetic over Q or an
//! odd prime field.

pub mod classify;
pub mod grading;
pub mod group;
pub mod homogeneity;
pub mod matrixalg;
pub mod verify;

pub use classify::{
    classify_space, cross_validate, enumerate_tuples, ClassificationRecord,
    ClassificationSummary, ClassifyError, CrossReport, DEFAULT_CAP,
};
pub use grading::{ElementaryGrading, GradingError, SupportMap};
pub use group::{Group, GroupElement, GroupError};
pub use homogeneity::{
    build_theta, check_segment_condition, classify_theta, theta_properties_check,
    ConditionWitness, Segment, ThetaDecision, ThetaMap, ThetaTag,
};
pub use matrixalg::{
    antiauto_apply, conjugate, involution_sign, is_homogeneous_matrix, oracle_homogeneity, Field,
    FieldError, FieldSpec, LinearMapOnUnits, MatrixError, OracleError, PrimeField, Rationals,
    UTMatrix,
};
pub use verify::{run_suite, Suite, SuiteReport, VerifyError, VerifyOptions};
