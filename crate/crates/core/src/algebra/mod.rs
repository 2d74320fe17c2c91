//! Exact polynomial algebra in `u` and `s = √t`.

pub mod bipoly;
pub mod coeff;
pub mod det;
pub mod matrix;
pub mod modular;
pub mod series;
pub mod upoly;

pub use bipoly::{collapse_to_t, eval_complex, imaginary_unit, BiPoly, TPoly};
pub use coeff::{gaussian, rat, Coeff, Gaussian, Rational};
pub use det::{
    det_c64, det_exact, det_exact_with, det_field, det_one_minus_s, det_one_minus_z_field, DetOptions, DetStrategy,
};
pub use matrix::{kron_swap, IntMatrix, Matrix, PolyMatrix};
pub use series::{series_inverse, TruncatedSeries};
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("series inverse needs constant term 1")]
    NonUnitConstantTerm,
    #[error("odd power of s in monomial u^{deg_u}*s^{deg_s}")]
    OddPowerOfS { deg_u: u32, deg_s: u32 },
    #[error("matrix is not of the form I + s X1 + s^2 X2")]
    NotAPencil,
    #[error("polynomial parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}
