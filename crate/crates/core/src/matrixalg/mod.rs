//! Exact matrix algebra over UT_n: scalar fields, the reflection
//! involution, the recursive block inverse, conjugation, and the
//! brute-force homogeneity oracle.

pub mod field;
pub mod linmap;
pub mod matrix;

pub use field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
pub use linmap::{oracle_homogeneity, rank, LinearMapOnUnits, OracleError};
pub use matrix::{
    antiauto_apply, conjugate, involution_sign, is_homogeneous_matrix, positions, tri_index,
    triangle_size, MatrixError, UTMatrix,
};
