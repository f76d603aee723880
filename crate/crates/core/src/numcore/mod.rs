//! Scalars, dense matrices, determinants and total positivity.

mod eigen;
mod mat;
mod minors;
mod scalar;
mod serial;

pub use eigen::{eigen_real, eigenvector_near, RealSpectrum};
pub use mat::{
    dot, norm2, norm_inf, normalized, unit_vector, vadd, vneg, vscale, vsub, Mat,
};
pub use minors::{
    is_totally_positive, is_totally_positive_brute, is_triangular_totally_positive,
    is_triangular_totally_positive_brute, minor, Side,
};
pub use serial::{mat_from_entries, mat_to_entries, vec_from_entries, vec_to_entries, Entry, MatEntries};
pub use scalar::{parse_rational, rational_to_string, Dd, Rational, Scalar, Sign, Tolerance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {0} out of bounds")]
    IndexOutOfBounds(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not triangular on the declared side")]
    NotTriangular,
    #[error("matrix is singular")]
    Singular,
    #[error("ambiguous sign: |{value:e}| is below the zero threshold")]
    AmbiguousSign { value: f64 },
    #[error("eigen solver did not converge")]
    NoConvergence,
    #[error("complex eigenvalue {re} + {im}i")]
    ComplexSpectrum { re: f64, im: f64 },
}
