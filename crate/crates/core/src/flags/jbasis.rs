//! Bases adapted to transverse pairs, isotropy, and neutral vectors.

use super::{FlagError, JForm, OrientedFlag};
use crate::numcore::{Mat, Scalar, Sign, Tolerance};

/// `(e_d, -e_{d-1}, e_{d-2}, ..., -e_2, e_1)`.
pub fn opposite_basis<T: Scalar>(e: &Mat<T>) -> Mat<T> {
    let d = e.cols();
    let cols: Vec<Vec<T>> = (0..d)
        .map(|c| {
            let v = e.column(d - 1 - c);
            if c % 2 == 1 {
                v.into_iter().map(|x| -x).collect()
            } else {
                v
            }
        })
        .collect();
    Mat::from_columns(&cols).expect("square")
}

/// Kernel of a `d x (d+1)` matrix given by columns, as signed maximal minors.
fn kernel_vector<T: Scalar>(cols: &[Vec<T>]) -> Result<Vec<T>, FlagError> {
    let m = cols.len();
    (0..m)
        .map(|k| {
            let rest: Vec<Vec<T>> = cols
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, c)| c.clone())
                .collect();
            let det = Mat::from_columns(&rest)?.det();
            Ok(if k % 2 == 0 { det } else { -det })
        })
        .collect()
}

fn strict_sign<T: Scalar>(x: &T, tol: &Tolerance, what: impl Fn() -> String) -> Result<Sign, FlagError> {
    match x.sign_with(if T::EXACT { 0.0 } else { tol.eps_sign }) {
        Sign::Zero if T::EXACT => Err(FlagError::NotTransverse),
        Sign::Zero => Err(FlagError::AmbiguousSign { context: what() }),
        s => Ok(s),
    }
}

/// Vector spanning `X^{(k)} ∩ Y^{(d+1-k)}`, positively oriented in the
/// quotient `X^{(k)} / X^{(k-1)}`. Also returns the sign of its coefficient on
/// `Y_{d+1-k}` (the orientation it induces on the other flag).
fn intersection_line<T: Scalar>(
    x: &OrientedFlag<T>,
    y: &OrientedFlag<T>,
    k: usize,
    tol: &Tolerance,
) -> Result<(Vec<T>, Sign), FlagError> {
    let d = x.dim();
    let mut cols = x.prefix(k);
    cols.extend(y.prefix(d + 1 - k));
    let mut z = kernel_vector(&cols)?;
    let lead = strict_sign(&z[k - 1], tol, || format!("intersection line {k}"))?;
    if lead == Sign::Neg {
        z.iter_mut().for_each(|v| *v = -v.clone());
    }
    let other = strict_sign(&(-z[d].clone()), tol, || format!("intersection line {k}"))?;
    let mut e = vec![T::zero(); d];
    for (c, coeff) in cols[..k].iter().zip(&z[..k]) {
        for (acc, v) in e.iter_mut().zip(c) {
            *acc = acc.clone() + coeff.clone() * v.clone();
        }
    }
    if !T::EXACT {
        e = crate::numcore::normalized(&e).ok_or(FlagError::NotTransverse)?;
    }
    Ok((e, other))
}

/// Basis `E` with `f = F_E` and `g = F_Ê`, for an oriented transverse pair.
pub fn transverse_basis<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<Mat<T>, FlagError> {
    let d = f.dim();
    let mut cols = Vec::with_capacity(d);
    for i in 1..=d {
        let (e, other) = intersection_line(f, g, i, tol)?;
        // Column d+1-i of the opposite basis is (-1)^{i+1} e_i.
        let want = if i % 2 == 1 { Sign::Pos } else { Sign::Neg };
        if other != want {
            return Err(FlagError::NotTransverse);
        }
        cols.push(e);
    }
    Ok(Mat::from_columns(&cols)?)
}

/// A J-basis `E` (`E^T J E = J`), with derived flags `F_E` and `F_Ê`.
#[derive(Clone, Debug, PartialEq)]
pub struct JBasisPair<T> {
    basis: Mat<T>,
}

impl<T: Scalar> JBasisPair<T> {
    pub fn new(basis: Mat<T>, form: &JForm, tol: &Tolerance) -> Result<Self, FlagError> {
        if !form.preserves(&basis, tol) {
            return Err(FlagError::NotIsotropic("basis is not a J-basis".into()));
        }
        Ok(JBasisPair { basis })
    }

    /// Caller guarantees `E^T J E = J`, e.g. for the image of a J-basis
    /// under a J-preserving map.
    pub(crate) fn from_basis_unchecked(basis: Mat<T>) -> Self {
        JBasisPair { basis }
    }

    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    pub fn e(&self, i: usize) -> Vec<T> {
        self.basis.column(i)
    }

    pub fn opposite(&self) -> JBasisPair<T> {
        JBasisPair {
            basis: opposite_basis(&self.basis),
        }
    }

    pub fn flag(&self) -> Result<OrientedFlag<T>, FlagError> {
        OrientedFlag::from_basis_unchecked(self.basis.clone())
    }

    pub fn opposite_flag(&self) -> Result<OrientedFlag<T>, FlagError> {
        OrientedFlag::from_basis_unchecked(opposite_basis(&self.basis))
    }

    /// Coordinates of `v` in this basis: `E^{-1} v = J E^T J v`.
    pub fn coordinates(&self, v: &[T]) -> Vec<T> {
        let d = v.len();
        let form = JForm::from_dim(d).expect("J-basis dimension");
        (0..d)
            .map(|r| {
                // (J E^T J v)_r = J_{r, d-1-r} * (e_{d-1-r} . v)
                let s = JForm::antidiagonal_sign(r);
                let p = form.pair(&self.basis.column(d - 1 - r), v);
                if s > 0 {
                    p
                } else {
                    -p
                }
            })
            .collect()
    }
}

/// Positive J-basis adapted to an oriented transverse pair of isotropic flags.
pub fn adapted_j_basis<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    form: &JForm,
    tol: &Tolerance,
) -> Result<JBasisPair<T>, FlagError> {
    let d = form.dim();
    let mid = form.middle();
    let mut e = transverse_basis(f, g, tol)?.columns();
    for i in 0..=mid {
        let j = d - 1 - i;
        let p = form.pair(&e[i], &e[j]);
        let want = if i % 2 == 0 { Sign::Neg } else { Sign::Pos };
        let scale = if T::EXACT { 1.0 } else { e_scale(&e[i], &e[j]) };
        if p.sign(tol, scale) != want {
            return Err(FlagError::RescalingInfeasible { index: i + 1 });
        }
        let target = p.abs();
        if i == j {
            let s = target.sqrt().ok_or(FlagError::Irrational { index: i + 1 })?;
            e[i] = e[i].iter().map(|x| x.clone() / s.clone()).collect();
        } else if T::EXACT {
            e[j] = e[j].iter().map(|x| x.clone() / target.clone()).collect();
        } else {
            let s = target.sqrt().expect("positive float");
            e[i] = e[i].iter().map(|x| x.clone() / s.clone()).collect();
            e[j] = e[j].iter().map(|x| x.clone() / s.clone()).collect();
        }
    }
    let basis = Mat::from_columns(&e)?;
    if !form.preserves(&basis, tol) {
        return Err(FlagError::NotIsotropic(
            "adapted basis fails E^T J E = J".into(),
        ));
    }
    Ok(JBasisPair { basis })
}

fn e_scale<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    crate::numcore::norm2(a) * crate::numcore::norm2(b)
}

/// Orthogonality `F^{(i)} ⊥ F^{(d-i)}` and the sign condition
/// `(-1)^{r} b_{d+1-r} . b_r > 0` (1-based `r`).
pub fn is_isotropic_flag<T: Scalar>(
    f: &OrientedFlag<T>,
    form: &JForm,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    let d = form.dim();
    if f.dim() != d {
        return Err(FlagError::BadDimension(f.dim()));
    }
    let gram = form.gram(f.basis());
    for r in 0..d {
        for c in 0..d {
            if r + c + 2 <= d {
                let zero = if T::EXACT {
                    gram[(r, c)].is_zero()
                } else {
                    gram[(r, c)].to_f64().abs() <= tol.eps_eq
                };
                if !zero {
                    return Ok(false);
                }
            }
        }
        let v = gram[(d - 1 - r, r)].clone();
        let signed = if r % 2 == 0 { -v } else { v };
        if signed.sign(tol, 1.0) != Sign::Pos {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Middle vector `e_{2n}` of the adapted J-basis; unit spacelike.
pub fn neutral_vector<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    form: &JForm,
    tol: &Tolerance,
) -> Result<Vec<T>, FlagError> {
    Ok(adapted_j_basis(f, g, form, tol)?.e(form.middle()))
}

/// Unit spacelike vector on `X^{(2n)} ∩ Y^{(2n)}`, positive in
/// `X^{(2n)} / X^{(2n-1)}`. Defined whenever that line is spacelike, without
/// isotropy of `x`.
pub fn neutral_middle_vector<T: Scalar>(
    x: &OrientedFlag<T>,
    y: &OrientedFlag<T>,
    form: &JForm,
    tol: &Tolerance,
) -> Result<Vec<T>, FlagError> {
    let k = form.middle() + 1;
    let (v, _) = intersection_line(x, y, k, tol)?;
    let p = form.pair(&v, &v);
    if p.sign(tol, crate::numcore::norm2(&v).powi(2)) != Sign::Pos {
        return Err(FlagError::NotSpacelike);
    }
    let s = p.sqrt().ok_or(FlagError::Irrational { index: k })?;
    Ok(v.into_iter().map(|c| c / s.clone()).collect())
}

/// Coefficient `c` in `v = x + c x0(X, Y) + y` with `x ∈ X^{(2n-1)}`,
/// `y ∈ Y^{(2n-1)}`. `y_flag` must be isotropic.
pub fn neutral_functional<T: Scalar>(
    x_flag: &OrientedFlag<T>,
    y_flag: &OrientedFlag<T>,
    v: &[T],
    form: &JForm,
    tol: &Tolerance,
) -> Result<T, FlagError> {
    if !is_isotropic_flag(y_flag, form, tol)? {
        return Err(FlagError::NotIsotropic("second flag of the functional".into()));
    }
    let mid = form.middle();
    let x0 = neutral_middle_vector(x_flag, y_flag, form, tol)?;
    let mut cols = x_flag.prefix(mid);
    cols.push(x0);
    cols.extend(y_flag.prefix(mid));
    let z = Mat::from_columns(&cols)?.solve(v)?;
    Ok(z[mid].clone())
}
