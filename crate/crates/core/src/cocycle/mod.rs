//! Affine deformations: arc vectors, the strip cocycle they define, the
//! half-weighted wall displacements, and the affine action.

mod deformation;
mod vectors;

pub use deformation::{cocycle_identity_residual, crossing_sum, AffineDeformation, DeformationFile};
pub use vectors::{ArcVectorEntry, ArcVectors};

use crate::flags::JForm;
use crate::freegroup::GroupError;
use crate::numcore::{vadd, Mat, NumError, Scalar};
use crate::posrep::{so_inverse, RepError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CocycleError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("wall {0} is not reached by crossing it outward from the base tile")]
    Unreachable(String),
    #[error("invalid deformation data: {0}")]
    Invalid(String),
}

impl From<crate::flags::FlagError> for CocycleError {
    fn from(e: crate::flags::FlagError) -> Self {
        CocycleError::Rep(e.into())
    }
}

/// `x -> A x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub linear: Mat<T>,
    pub translation: Vec<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn identity(d: usize) -> Self {
        AffineMap {
            linear: Mat::identity(d),
            translation: vec![T::zero(); d],
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap<T>) -> AffineMap<T> {
        AffineMap {
            linear: self.linear.mul(&other.linear),
            translation: vadd(&self.linear.mul_vec(&other.translation), &self.translation),
        }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        vadd(&self.linear.mul_vec(x), &self.translation)
    }

    /// Inverse of a map whose linear part preserves `J`.
    pub fn inverse(&self, form: &JForm) -> AffineMap<T> {
        let inv = so_inverse(&self.linear, form);
        let t = inv.mul_vec(&self.translation).into_iter().map(|x| -x).collect();
        AffineMap {
            linear: inv,
            translation: t,
        }
    }

    pub fn to_f64(&self) -> AffineMap<f64> {
        AffineMap {
            linear: self.linear.to_f64(),
            translation: self.translation.iter().map(Scalar::to_f64).collect(),
        }
    }
}
