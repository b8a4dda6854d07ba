pub mod error;
pub mod numeric;
pub mod multilinear;
pub mod chow;
pub mod camera;
pub mod poly;
pub mod projection;
pub mod consistency;
pub mod sampling;
pub mod triangulation;
pub mod io;

pub use error::{Error, Result};
pub use numeric::{Mat, ProjVec, Rational, Scalar};

/// Default tolerance for floating-point verdicts (sine of projective angle).
pub const DEFAULT_TOL: f64 = 1e-8;
