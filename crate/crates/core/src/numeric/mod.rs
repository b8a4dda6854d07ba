//! Scalar fields and small dense linear algebra.

mod dual;
mod matrix;
mod projvec;
mod scalar;

pub use dual::Dual;
pub use matrix::{Mat, RANK_THRESHOLD};
pub use projvec::{proj_distance, proj_eq, ProjVec};
pub use scalar::{
    from_rational, int, parse_rational, GaussianRational, rat, rational_to_string, Rational, Scalar,
    ELIMINATION_EPS,
};

pub(crate) use matrix::dot;
pub(crate) use scalar::max_modulus;

pub use num_complex::Complex64;
