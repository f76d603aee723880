//! Positive representations into SO(2n,2n-1): root exponentials and the
//! positive semigroup, the symmetric-power representation of SL(2,R), the
//! Veronese boundary map, and equivariant boundary flags on arc endpoints.

mod boundary;
mod representation;
mod roots;
mod sym;

pub use boundary::{BoundaryMap, FlagPingPongReport};
pub use representation::{Provenance, RepFile, Representation};
pub use roots::{
    chevalley_generator, elementary_exp, longest_word_so, positive_element, positive_semigroup_element,
    positive_torus, root_exp, semigroup_trial, SemigroupTrial,
};
pub use sym::{sym_representation, veronese_basis, veronese_flag, SymPower};

use crate::flags::{FlagError, JForm};
use crate::freegroup::GroupError;
use crate::numcore::{Mat, NumError, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("root index {index} outside 1..={max}")]
    RootRange { index: usize, max: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("parameter {index} is not positive")]
    NonPositiveParameter { index: usize },
    #[error("matrix fails SO(2n,2n-1) certification: form residual {form}, determinant residual {det}")]
    NotInGroup { form: f64, det: f64 },
    #[error("square root leaves the exact backend")]
    Irrational,
    #[error("invalid representation data: {0}")]
    Invalid(String),
}

/// A matrix preserving `J` with determinant one, with its certification residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T> {
    matrix: Mat<T>,
    form_residual: f64,
    det_residual: f64,
}

impl<T: Scalar> GroupElement<T> {
    /// Certifies membership: residuals must vanish exactly on exact backends
    /// and stay below `eps_eq` times `max(1, |M|^2)` otherwise.
    pub fn certify(matrix: Mat<T>, form: &JForm, tol: &Tolerance) -> Result<Self, RepError> {
        let d = form.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(NumError::Dimension(format!("expected {d}x{d}")).into());
        }
        let j: Mat<T> = form.matrix();
        let res = matrix.transpose().mul(&j).mul(&matrix).sub(&j);
        let det = matrix.det() - T::one();
        let (form_residual, det_residual) = (res.max_abs(), det.to_f64().abs());
        let ok = if T::EXACT {
            res.max_abs() == 0.0 && det.is_zero()
        } else {
            let scale = matrix.max_abs().powi(2).max(1.0);
            form_residual <= tol.eps_eq * scale && det_residual <= tol.eps_eq * scale.powf(d as f64 / 2.0)
        };
        if !ok {
            return Err(RepError::NotInGroup {
                form: form_residual,
                det: det_residual,
            });
        }
        Ok(GroupElement {
            matrix,
            form_residual,
            det_residual,
        })
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat<T> {
        self.matrix
    }

    /// Largest entry of `M^T J M - J` at certification.
    pub fn form_residual(&self) -> f64 {
        self.form_residual
    }

    pub fn det_residual(&self) -> f64 {
        self.det_residual
    }
}

/// `J M^T J`, the inverse of any matrix preserving `J`.
pub fn so_inverse<T: Scalar>(m: &Mat<T>, form: &JForm) -> Mat<T> {
    let d = form.dim();
    Mat::from_fn(d, d, |r, c| {
        let s = JForm::antidiagonal_sign(r) * JForm::antidiagonal_sign(c);
        let v = m[(d - 1 - c, d - 1 - r)].clone();
        if s > 0 {
            v
        } else {
            -v
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rational;

    #[test]
    fn certification_rejects_non_members() {
        let form = JForm::new(1).unwrap();
        let tol = Tolerance::default();
        let id: Mat<Rational> = Mat::identity(3);
        assert!(GroupElement::certify(id, &form, &tol).is_ok());
        let bad: Mat<Rational> = Mat::from_i64_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(
            GroupElement::certify(bad, &form, &tol),
            Err(RepError::NotInGroup { .. })
        ));
        let neg: Mat<Rational> = Mat::identity(3).scale(&Rational::from_i64(-1));
        assert!(GroupElement::certify(neg, &form, &tol).is_err());
    }

    #[test]
    fn so_inverse_inverts() {
        let form = JForm::new(2).unwrap();
        let m = positive_semigroup_element::<Rational>(2, &(1..=9).map(|k| Rational::from_ratio(k, 4)).collect::<Vec<_>>())
            .unwrap()
            .into_matrix();
        assert_eq!(m.mul(&so_inverse(&m, &form)), Mat::identity(7));
    }
}
