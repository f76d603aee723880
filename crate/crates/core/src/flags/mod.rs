//! Oriented flags in R^{4n-1}, the form J, positivity of flag tuples,
//! J-bases adapted to transverse pairs, and neutral vectors.

mod jbasis;
mod positivity;
mod sample;

pub use jbasis::{
    adapted_j_basis, is_isotropic_flag, neutral_functional, neutral_middle_vector, neutral_vector,
    opposite_basis, transverse_basis, JBasisPair,
};
pub use positivity::{
    closure_nested, in_interval, in_isotropic_interval, is_oriented_transverse,
    is_positive_triple, is_positive_tuple, triple_margin,
};
pub use sample::{flag_pair, lower_unipotent_tp, random_flag_in_interval};

use crate::numcore::{Mat, NumError, Scalar, Sign, Tolerance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlagError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("ambiguous sign at {context}")]
    AmbiguousSign { context: String },
    #[error("basis is not positively oriented")]
    NegativeOrientation,
    #[error("flags are not oriented transverse")]
    NotTransverse,
    #[error("flag is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("rescaling infeasible: J-pairing of e_{index} has the wrong sign")]
    RescalingInfeasible { index: usize },
    #[error("middle vector is not spacelike")]
    NotSpacelike,
    #[error("square root leaves the exact backend at index {index}")]
    Irrational { index: usize },
    #[error("dimension {0} is not of the form 4n-1")]
    BadDimension(usize),
    #[error("need at least 3 flags, got {0}")]
    TooFewFlags(usize),
}

/// The symmetric form of signature (2n, 2n-1) with antidiagonal matrix
/// `J[r][d-1-r] = (-1)^(r+1)` (0-based rows).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JForm {
    n: usize,
}

impl JForm {
    pub fn new(n: usize) -> Result<Self, FlagError> {
        if n == 0 {
            return Err(FlagError::BadDimension(0));
        }
        Ok(JForm { n })
    }

    pub fn from_dim(d: usize) -> Result<Self, FlagError> {
        if d < 3 || !(d + 1).is_multiple_of(4) {
            return Err(FlagError::BadDimension(d));
        }
        Ok(JForm { n: (d + 1) / 4 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n - 1
    }

    /// 0-based index of the middle basis vector `e_{2n}`.
    pub fn middle(&self) -> usize {
        2 * self.n - 1
    }

    /// Antidiagonal entry in row `r` (0-based): `+1` for odd `r`, `-1` for even.
    pub fn antidiagonal_sign(r: usize) -> i64 {
        if r.is_multiple_of(2) {
            -1
        } else {
            1
        }
    }

    pub fn matrix<T: Scalar>(&self) -> Mat<T> {
        let d = self.dim();
        Mat::from_fn(d, d, |r, c| {
            if r + c == d - 1 {
                T::from_i64(Self::antidiagonal_sign(r))
            } else {
                T::zero()
            }
        })
    }

    /// `u . v = u^T J v`.
    pub fn pair<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        let d = self.dim();
        (0..d).fold(T::zero(), |acc, r| {
            let t = u[r].clone() * v[d - 1 - r].clone();
            if r % 2 == 0 {
                acc - t
            } else {
                acc + t
            }
        })
    }

    /// `B^T J B`.
    pub fn gram<T: Scalar>(&self, b: &Mat<T>) -> Mat<T> {
        let cols = b.columns();
        Mat::from_fn(b.cols(), b.cols(), |r, c| self.pair(&cols[r], &cols[c]))
    }

    /// Whether `g^T J g = J` (exactly, or within `eps_eq` relative to `|g|^2`).
    pub fn preserves<T: Scalar>(&self, g: &Mat<T>, tol: &Tolerance) -> bool {
        let residual = self.gram(g).sub(&self.matrix());
        if T::EXACT {
            residual.max_abs() == 0.0 && residual.to_rows().iter().flatten().all(T::is_zero)
        } else {
            residual.max_abs() <= tol.eps_eq * g.max_abs().powi(2).max(1.0)
        }
    }
}

/// A complete flag with an orientation on each quotient, stored as a basis
/// whose first `i` columns span the `i`-th subspace. Float backends keep an
/// orthonormalized representative.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedFlag<T> {
    basis: Mat<T>,
}

impl<T: Scalar> OrientedFlag<T> {
    /// Flag spanned by the columns of `basis`, which must be positively oriented.
    pub fn new(basis: Mat<T>, tol: &Tolerance) -> Result<Self, FlagError> {
        if !basis.is_square() {
            return Err(NumError::NotSquare.into());
        }
        let flag = Self::from_basis_unchecked(basis)?;
        match block_sign(&flag.basis.columns(), tol) {
            Ok(Sign::Pos) => Ok(flag),
            Ok(_) => Err(FlagError::NegativeOrientation),
            Err(_) => Err(FlagError::AmbiguousSign {
                context: "flag basis orientation".into(),
            }),
        }
    }

    /// Skips the orientation check (orthonormalization still applies to floats).
    pub fn from_basis_unchecked(basis: Mat<T>) -> Result<Self, FlagError> {
        let basis = if T::EXACT {
            basis
        } else {
            orthonormalize(&basis)?
        };
        Ok(OrientedFlag { basis })
    }

    /// Flag of the standard basis.
    pub fn standard(d: usize) -> Self {
        OrientedFlag {
            basis: Mat::identity(d),
        }
    }

    /// Flag of the opposite of the standard basis.
    pub fn standard_opposite(d: usize) -> Self {
        OrientedFlag {
            basis: opposite_basis(&Mat::identity(d)),
        }
    }

    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn column(&self, i: usize) -> Vec<T> {
        self.basis.column(i)
    }

    /// Positively oriented vector spanning the line.
    pub fn line(&self) -> Vec<T> {
        self.column(0)
    }

    /// Columns spanning the `i`-dimensional subspace.
    pub fn prefix(&self, i: usize) -> Vec<Vec<T>> {
        (0..i).map(|c| self.basis.column(c)).collect()
    }

    /// Image under a linear map of determinant one.
    pub fn transform(&self, g: &Mat<T>) -> Result<Self, FlagError> {
        Self::from_basis_unchecked(g.mul(&self.basis))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<OrientedFlag<U>, FlagError> {
        OrientedFlag::from_basis_unchecked(self.basis.map(f))
    }

    /// Column-echelon representative: each column is cleared on the pivot
    /// rows of earlier columns and scaled so its pivot (largest entry) is ±1.
    pub fn canonical(&self) -> Mat<T> {
        let d = self.dim();
        let mut out: Vec<Vec<T>> = Vec::with_capacity(d);
        let mut pivots: Vec<usize> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = self.basis.column(j);
            for (col, &p) in out.iter().zip(&pivots) {
                let f = v[p].clone() / col[p].clone();
                if !f.is_zero() {
                    for (x, c) in v.iter_mut().zip(col) {
                        *x = x.clone() - f.clone() * c.clone();
                    }
                }
                v[p] = T::zero();
            }
            let p = (0..d)
                .filter(|r| !pivots.contains(r))
                .max_by(|&a, &b| v[a].to_f64().abs().total_cmp(&v[b].to_f64().abs()))
                .expect("a free row remains");
            let scale = v[p].abs();
            for x in v.iter_mut() {
                *x = x.clone() / scale.clone();
            }
            out.push(v);
            pivots.push(p);
        }
        Mat::from_columns(&out).expect("square")
    }

    /// Equality of oriented flags: `F^{-1} G` is upper triangular with a
    /// positive diagonal.
    pub fn same_flag(&self, other: &Self, tol: &Tolerance) -> Result<bool, FlagError> {
        let m = self.basis.inverse()?.mul(&other.basis);
        let scale = m.max_abs();
        for r in 0..m.rows() {
            for c in 0..r {
                let zero = if T::EXACT {
                    m[(r, c)].is_zero()
                } else {
                    m[(r, c)].to_f64().abs() <= tol.eps_eq * scale.max(1.0)
                };
                if !zero {
                    return Ok(false);
                }
            }
            if m[(r, r)].sign(tol, scale) != Sign::Pos {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Gram-Schmidt (applied twice) keeping each column's orientation modulo
/// earlier columns; the result spans the same oriented flag.
fn orthonormalize<T: Scalar>(b: &Mat<T>) -> Result<Mat<T>, FlagError> {
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let mut v = b.column(j);
        for _pass in 0..2 {
            for q in &cols {
                let c = crate::numcore::dot(q, &v);
                for (x, qi) in v.iter_mut().zip(q) {
                    *x = x.clone() - c.clone() * qi.clone();
                }
            }
        }
        let unit = crate::numcore::normalized(&v).ok_or(NumError::Singular)?;
        cols.push(unit);
    }
    Ok(Mat::from_columns(&cols)?)
}

/// Sign of the determinant of the given columns. Float columns are scaled to
/// unit length first so the zero threshold is `eps_sign` on a volume in
/// `[-1, 1]`.
pub(crate) fn block_sign<T: Scalar>(cols: &[Vec<T>], tol: &Tolerance) -> Result<Sign, NumError> {
    let det = normalized_det(cols)?;
    if T::EXACT {
        return Ok(det.exact_sign());
    }
    match det.sign_with(tol.eps_sign) {
        Sign::Zero => Err(NumError::AmbiguousSign {
            value: det.to_f64(),
        }),
        s => Ok(s),
    }
}

/// Determinant of the columns, each scaled to unit length on float backends.
pub(crate) fn normalized_det<T: Scalar>(cols: &[Vec<T>]) -> Result<T, NumError> {
    let m = if T::EXACT {
        Mat::from_columns(cols)?
    } else {
        let unit: Vec<Vec<T>> = cols
            .iter()
            .map(|c| crate::numcore::normalized(c).unwrap_or_else(|| c.clone()))
            .collect();
        Mat::from_columns(&unit)?
    };
    if !m.is_square() {
        return Err(NumError::NotSquare);
    }
    Ok(m.det())
}
