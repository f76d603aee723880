//! Transversality and the partial cyclic order on oriented flags.

use itertools::Itertools;

use super::{block_sign, is_isotropic_flag, normalized_det, FlagError, JForm, OrientedFlag};
use crate::numcore::{NumError, Scalar, Sign, Tolerance};

fn concat<T: Scalar>(parts: &[(&OrientedFlag<T>, usize)]) -> Vec<Vec<T>> {
    parts.iter().flat_map(|(f, k)| f.prefix(*k)).collect()
}

fn decide<T: Scalar>(cols: &[Vec<T>], tol: &Tolerance, context: impl Fn() -> String) -> Result<bool, FlagError> {
    match block_sign(cols, tol) {
        Ok(s) => Ok(s == Sign::Pos),
        Err(NumError::AmbiguousSign { .. }) => Err(FlagError::AmbiguousSign { context: context() }),
        Err(e) => Err(e.into()),
    }
}

/// `det(F_1..F_i | G_1..G_{d-i}) > 0` for every `0 <= i <= d`.
pub fn is_oriented_transverse<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    let d = f.dim();
    for i in 0..=d {
        let cols = concat(&[(f, i), (g, d - i)]);
        if !decide(&cols, tol, || format!("transversality i={i}"))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det(F_1..F_i | G_1..G_j | H_1..H_k) > 0` whenever `i + j + k = d`.
pub fn is_positive_triple<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    h: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    let d = f.dim();
    for i in 0..=d {
        for j in 0..=d - i {
            let k = d - i - j;
            let cols = concat(&[(f, i), (g, j), (h, k)]);
            if !decide(&cols, tol, || format!("triple (i,j,k)=({i},{j},{k})"))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest determinant of the triple sweep, columns scaled to unit length.
pub fn triple_margin<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    h: &OrientedFlag<T>,
) -> Result<f64, FlagError> {
    let d = f.dim();
    let mut margin = f64::INFINITY;
    for i in 0..=d {
        for j in 0..=d - i {
            let cols = concat(&[(f, i), (g, j), (h, d - i - j)]);
            margin = margin.min(normalized_det(&cols)?.to_f64());
        }
    }
    Ok(margin)
}

/// Every sub-triple taken in the given (cyclic) order is positive.
pub fn is_positive_tuple<T: Scalar>(
    flags: &[OrientedFlag<T>],
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    if flags.len() < 3 {
        return Err(FlagError::TooFewFlags(flags.len()));
    }
    for (a, b, c) in (0..flags.len()).tuple_combinations() {
        if !is_positive_triple(&flags[a], &flags[b], &flags[c], tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` lies in the interval from `f` to `g`.
pub fn in_interval<T: Scalar>(
    x: &OrientedFlag<T>,
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    if !is_oriented_transverse(f, g, tol)? {
        return Err(FlagError::NotTransverse);
    }
    is_positive_triple(f, x, g, tol)
}

/// Interval membership restricted to isotropic flags.
pub fn in_isotropic_interval<T: Scalar>(
    x: &OrientedFlag<T>,
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    form: &JForm,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    Ok(in_interval(x, f, g, tol)? && is_isotropic_flag(x, form, tol)?)
}

/// Positivity of `(f, g, h, k)`, which places the closure of the interval
/// from `g` to `h` inside the interval from `f` to `k`.
pub fn closure_nested<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    h: &OrientedFlag<T>,
    k: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<bool, FlagError> {
    is_positive_tuple(&[f.clone(), g.clone(), h.clone(), k.clone()], tol)
}
