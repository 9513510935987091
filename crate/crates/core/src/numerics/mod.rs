//! Exact linear algebra over the rationals plus a float bridge for spectral tests.

mod mat;
pub mod poly;
mod rational;
mod spectral;
mod subspace;

pub use mat::{Echelon, Mat, NoSolution, ParseMatError};
pub use rational::{abs, int, parse_rational, ratio, to_f64, ParseRationalError, Rational};
pub use spectral::{
    distinct_eigenvalues, numeric_rank, pbh_full_rank, spectral_radius, NotSquare, SpectralRadius,
    RANK_TOL, UNIT_CIRCLE_TOL,
};
pub use subspace::{DimensionMismatch, Subspace};
