//! Simple root vectors of so(2n,2n-1), their exponentials, and the positive
//! semigroup generated by them.

use super::{GroupElement, RepError};
use crate::flags::JForm;
use serde::{Deserialize, Serialize};

use crate::numcore::{
    is_totally_positive, is_triangular_totally_positive, rational_to_string, Mat, Rational, Scalar, Side, Sign, Tolerance,
};

fn check_root(i: usize, n: usize) -> Result<(), RepError> {
    let max = 2 * n - 1;
    if i == 0 || i > max {
        return Err(RepError::RootRange { index: i, max });
    }
    Ok(())
}

/// `E_{i,i+1} + E_{d-i,d+1-i}` (1-based `i` in `1..=2n-1`, `d = 4n-1`).
pub fn chevalley_generator<T: Scalar>(i: usize, n: usize) -> Result<Mat<T>, RepError> {
    check_root(i, n)?;
    let d = 4 * n - 1;
    let mut x = Mat::zeros(d, d);
    x[(i - 1, i)] = T::one();
    x[(d - i - 1, d - i)] = T::one();
    Ok(x)
}

/// `exp(t E_{r,c})` for `r != c` (0-based).
pub fn elementary_exp<T: Scalar>(d: usize, r: usize, c: usize, t: T) -> Mat<T> {
    let mut m = Mat::identity(d);
    m[(r, c)] = t;
    m
}

/// `exp(t X_i)`. Off the middle root the two summands commute and square to
/// zero; the middle root squares to `E_{2n-1,2n+1}`.
pub fn root_exp<T: Scalar>(i: usize, n: usize, t: &T) -> Result<Mat<T>, RepError> {
    let x = chevalley_generator::<T>(i, n)?;
    let d = 4 * n - 1;
    let mut m = Mat::identity(d).add(&x.scale(t));
    if i == 2 * n - 1 {
        m[(i - 1, i + 1)] = t.clone() * t.clone() * T::half();
    }
    Ok(m)
}

/// Reduced word `((s_1 s_3 ... s_{2n-1})(s_2 s_4 ... s_{2n-2}))^{2n-1}` for
/// the longest Weyl element, as 1-based root indices.
pub fn longest_word_so(n: usize) -> Vec<usize> {
    let odd = (1..2 * n).step_by(2);
    let even = (2..2 * n - 1).step_by(2);
    let block: Vec<usize> = odd.chain(even).collect();
    (0..2 * n - 1).flat_map(|_| block.iter().copied()).collect()
}

fn check_params<T: Scalar>(n: usize, params: &[T]) -> Result<(), RepError> {
    let expected = (2 * n - 1).pow(2);
    if params.len() != expected {
        return Err(RepError::ParameterCount {
            expected,
            got: params.len(),
        });
    }
    match params.iter().position(|p| p.exact_sign() != Sign::Pos) {
        Some(index) => Err(RepError::NonPositiveParameter { index }),
        None => Ok(()),
    }
}

fn upper_product<T: Scalar>(n: usize, params: &[T]) -> Result<Mat<T>, RepError> {
    let mut m = Mat::identity(4 * n - 1);
    for (i, t) in longest_word_so(n).into_iter().zip(params) {
        m = m.mul(&root_exp(i, n, t)?);
    }
    Ok(m)
}

/// `exp(t_1 X_{i_1}) ... exp(t_N X_{i_N})` along the longest word: a
/// unipotent upper triangular element of the positive semigroup.
pub fn positive_semigroup_element<T: Scalar>(n: usize, params: &[T]) -> Result<GroupElement<T>, RepError> {
    check_params(n, params)?;
    let m = upper_product(n, params)?;
    GroupElement::certify(m, &JForm::new(n)?, &Tolerance::default())
}

/// Positive diagonal element `diag(h_1, ..., h_{2n-1}, 1, 1/h_{2n-1}, ..., 1/h_1)`.
pub fn positive_torus<T: Scalar>(n: usize, h: &[T]) -> Result<Mat<T>, RepError> {
    let half = 2 * n - 1;
    if h.len() != half {
        return Err(RepError::ParameterCount {
            expected: half,
            got: h.len(),
        });
    }
    if let Some(index) = h.iter().position(|p| p.exact_sign() != Sign::Pos) {
        return Err(RepError::NonPositiveParameter { index });
    }
    let d = 4 * n - 1;
    let diag: Vec<T> = (0..d)
        .map(|r| match r.cmp(&half) {
            std::cmp::Ordering::Less => h[r].clone(),
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Greater => T::one() / h[d - 1 - r].clone(),
        })
        .collect();
    Ok(Mat::diagonal(&diag))
}

/// `L H U` with `U` from `upper`, `L` the transpose of the product along
/// `lower`, and `H` the positive torus element of `torus`.
pub fn positive_element<T: Scalar>(
    n: usize,
    lower: &[T],
    torus: &[T],
    upper: &[T],
) -> Result<GroupElement<T>, RepError> {
    check_params(n, lower)?;
    check_params(n, upper)?;
    let l = upper_product(n, lower)?.transpose();
    let h = positive_torus(n, torus)?;
    let u = upper_product(n, upper)?;
    GroupElement::certify(l.mul(&h).mul(&u), &JForm::new(n)?, &Tolerance::default())
}

/// Checks on one random element `L H U` of the positive semigroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupTrial {
    /// Exact `M^T J M = J` and `det M = 1`.
    pub in_group: bool,
    /// The upper factor is triangular totally positive.
    pub upper_factor_tp: bool,
    /// All minors of `L H U` are positive (initial-minor criterion).
    pub totally_positive: bool,
    /// The middle diagonal entry is at least one.
    pub middle_entry: String,
    pub middle_at_least_one: bool,
}

impl SemigroupTrial {
    pub fn passed(&self) -> bool {
        self.in_group && self.upper_factor_tp && self.totally_positive && self.middle_at_least_one
    }
}

/// Draws parameters `k/8`, `k` uniform in `1..=32`, and certifies the
/// resulting element in exact arithmetic.
pub fn semigroup_trial<R: rand::Rng>(n: usize, rng: &mut R) -> Result<SemigroupTrial, RepError> {
    let mut params = |k: usize| -> Vec<Rational> { (0..k).map(|_| Rational::from_ratio(rng.gen_range(1..=32), 8)).collect() };
    let k = (2 * n - 1).pow(2);
    let (lower, torus, upper) = (params(k), params(2 * n - 1), params(k));
    let tol = Tolerance::default();
    let u = positive_semigroup_element(n, &upper)?;
    let upper_factor_tp = is_triangular_totally_positive(u.matrix(), Side::Upper, &tol)?;
    let m = positive_element(n, &lower, &torus, &upper)?;
    let mid = 2 * n - 1;
    let middle = &m.matrix()[(mid, mid)];
    Ok(SemigroupTrial {
        // `certify` rejects anything off the group; exact residuals are zero.
        in_group: m.form_residual() == 0.0 && m.det_residual() == 0.0,
        upper_factor_tp,
        totally_positive: is_totally_positive(m.matrix(), &tol),
        middle_entry: rational_to_string(middle),
        middle_at_least_one: *middle >= Rational::from_i64(1),
    })
}
