//! Random flags inside intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{opposite_basis, transverse_basis, FlagError, OrientedFlag};
use crate::numcore::{Mat, Scalar, Tolerance};

/// Reduced word for the longest permutation of `d` letters:
/// `(s_1)(s_2 s_1)(s_3 s_2 s_1)...`, as 0-based generator indices.
pub(crate) fn longest_word(d: usize) -> Vec<usize> {
    (0..d - 1).flat_map(|k| (0..=k).rev()).collect()
}

/// Product of elementary lower factors `I + t E_{i+1,i}` along the longest
/// word; positive parameters give a unipotent lower triangular totally
/// positive matrix. `params` is cycled if shorter than the word.
pub fn lower_unipotent_tp<T: Scalar>(d: usize, params: &[T]) -> Mat<T> {
    let mut m: Mat<T> = Mat::identity(d);
    for (idx, i) in longest_word(d).into_iter().enumerate() {
        let t = params[idx % params.len()].clone();
        // Right multiplication by I + t E_{i+1,i} adds t * column i+1 to column i.
        for r in 0..d {
            let v = m[(r, i)].clone() + t.clone() * m[(r, i + 1)].clone();
            m[(r, i)] = v;
        }
    }
    m
}

/// Random rational-valued parameter in `[1/8, 4]`, exact on every backend.
pub(crate) fn random_parameter<T: Scalar>(rng: &mut impl Rng) -> T {
    T::from_ratio(rng.gen_range(1..=32), 8)
}

/// A flag in the interval from `f` to `g`: the span of `E U`, where
/// `f = F_E`, `g = F_Ê` and `U` is a random unipotent lower TP matrix.
pub fn random_flag_in_interval<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    seed: u64,
    tol: &Tolerance,
) -> Result<OrientedFlag<T>, FlagError> {
    let e = transverse_basis(f, g, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = f.dim();
    let params: Vec<T> = (0..d * (d - 1) / 2)
        .map(|_| random_parameter(&mut rng))
        .collect();
    let u = lower_unipotent_tp(d, &params);
    OrientedFlag::from_basis_unchecked(e.mul(&u))
}

/// The pair `(F_E, F_Ê)` of a positively oriented basis.
pub fn flag_pair<T: Scalar>(
    e: &Mat<T>,
) -> Result<(OrientedFlag<T>, OrientedFlag<T>), FlagError> {
    Ok((
        OrientedFlag::from_basis_unchecked(e.clone())?,
        OrientedFlag::from_basis_unchecked(opposite_basis(e))?,
    ))
}
