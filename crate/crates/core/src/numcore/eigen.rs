//! Real eigenpairs of float matrices.

use nalgebra::DMatrix;

use super::mat::{normalized, Mat};
use super::scalar::Tolerance;
use super::NumError;

#[derive(Clone, Debug)]
pub struct RealSpectrum {
    /// Eigenvalues sorted by decreasing absolute value.
    pub values: Vec<f64>,
    /// Unit eigenvectors, same order as `values`.
    pub vectors: Vec<Vec<f64>>,
    /// Every eigenvalue separated from the others by more than `eps_eq`.
    pub simple: bool,
}

fn to_nalgebra(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

/// Eigen decomposition for matrices with real spectrum.
///
/// A complex pair whose imaginary part exceeds `eps_eq` (relative to the
/// modulus) yields [`NumError::ComplexSpectrum`].
pub fn eigen_real(m: &Mat<f64>, tol: &Tolerance) -> Result<RealSpectrum, NumError> {
    dominant_eigen(m, m.rows(), tol)
}

/// The `count` eigenvalues of largest modulus, which must be real. The
/// remaining ones are not inspected; on badly scaled matrices they are noise.
fn dominant_eigen(m: &Mat<f64>, count: usize, tol: &Tolerance) -> Result<RealSpectrum, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare);
    }
    let a = to_nalgebra(m);
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or(NumError::NoConvergence)?;
    let mut complex: Vec<_> = schur.complex_eigenvalues().iter().copied().collect();
    complex.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.re.total_cmp(&x.re)));
    let mut values = Vec::with_capacity(count);
    for z in complex.iter().take(count) {
        if z.im.abs() > tol.eps_eq * z.norm().max(1.0) {
            return Err(NumError::ComplexSpectrum {
                re: z.re,
                im: z.im,
            });
        }
        values.push(z.re);
    }
    values.sort_by(|x, y| y.abs().total_cmp(&x.abs()).then(y.total_cmp(x)));
    let simple = values
        .windows(2)
        .all(|w| (w[0] - w[1]).abs() > tol.eps_eq * w[0].abs().max(1.0));
    let vectors = values
        .iter()
        .map(|&lambda| eigenvector_near(m, lambda))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RealSpectrum {
        values,
        vectors,
        simple,
    })
}

/// Unit eigenvector for the eigenvalue closest to `shift` by inverse iteration.
pub fn eigenvector_near(m: &Mat<f64>, shift: f64) -> Result<Vec<f64>, NumError> {
    let d = m.rows();
    let a = to_nalgebra(m);
    // Perturb the shift so the shifted matrix stays invertible.
    let nudge = (shift.abs().max(1.0)) * 1e-10;
    let shifted = &a - DMatrix::identity(d, d) * (shift + nudge);
    let lu = shifted.lu();
    let mut v = nalgebra::DVector::from_fn(d, |i, _| 1.0 + 0.1 * i as f64);
    for _ in 0..8 {
        let Some(next) = lu.solve(&v) else {
            return Err(NumError::Singular);
        };
        let n = next.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(NumError::NoConvergence);
        }
        v = next / n;
    }
    normalized(v.as_slice()).ok_or(NumError::NoConvergence)
}
