//! Minors and total-positivity tests.

use itertools::Itertools;

use super::mat::Mat;
use super::scalar::{Scalar, Sign, Tolerance};
use super::NumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Determinant of the submatrix on `rows` x `cols` (0-based, strictly increasing).
pub fn minor<T: Scalar>(m: &Mat<T>, rows: &[usize], cols: &[usize]) -> Result<T, NumError> {
    if rows.is_empty() || rows.len() != cols.len() {
        return Err(NumError::Dimension(format!(
            "minor needs equal nonempty index sets, got {} rows and {} cols",
            rows.len(),
            cols.len()
        )));
    }
    if !rows.windows(2).all(|w| w[0] < w[1]) || !cols.windows(2).all(|w| w[0] < w[1]) {
        return Err(NumError::Dimension("minor index sets must increase".into()));
    }
    Ok(m.select(rows, cols)?.det())
}

fn positive<T: Scalar>(v: &T, tol: &Tolerance, scale: f64) -> bool {
    v.sign(tol, scale) == Sign::Pos
}

fn range(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

/// Total positivity through minors on consecutive index sets with the row or
/// column block starting at the first index. Positivity of these forces
/// positivity of every minor.
pub fn is_totally_positive<T: Scalar>(m: &Mat<T>, tol: &Tolerance) -> bool {
    assert!(m.is_square(), "total positivity needs a square matrix");
    let d = m.rows();
    let scale = m.norm_inf();
    for k in 1..=d {
        for start in 0..=d - k {
            let anchored = [(range(0, k), range(start, k)), (range(start, k), range(0, k))];
            for (rows, cols) in anchored {
                let v = m.select(&rows, &cols).expect("in range").det();
                if !positive(&v, tol, scale.powi(k as i32)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Brute force over every minor; exponential, for small matrices only.
pub fn is_totally_positive_brute<T: Scalar>(m: &Mat<T>, tol: &Tolerance) -> bool {
    let d = m.rows();
    let scale = m.norm_inf();
    (1..=d).all(|k| {
        (0..d).combinations(k).all(|rows| {
            (0..d).combinations(k).all(|cols| {
                let v = m.select(&rows, &cols).expect("in range").det();
                positive(&v, tol, scale.powi(k as i32))
            })
        })
    })
}

/// Whether a minor of an upper triangular matrix can be nonzero:
/// the r-th row index must not exceed the r-th column index.
fn structurally_nonzero(rows: &[usize], cols: &[usize], side: Side) -> bool {
    rows.iter().zip(cols).all(|(r, c)| match side {
        Side::Upper => r <= c,
        Side::Lower => r >= c,
    })
}

fn check_triangular<T: Scalar>(m: &Mat<T>, side: Side, tol: &Tolerance) -> Result<(), NumError> {
    let scale = m.max_abs();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let off = match side {
                Side::Upper => r > c,
                Side::Lower => r < c,
            };
            if off && m[(r, c)].sign(tol, scale) != Sign::Zero {
                return Err(NumError::NotTriangular);
            }
        }
    }
    Ok(())
}

/// Triangular total positivity: every minor that is not forced to vanish by
/// the triangular shape is strictly positive. Consecutive minors suffice.
pub fn is_triangular_totally_positive<T: Scalar>(
    m: &Mat<T>,
    side: Side,
    tol: &Tolerance,
) -> Result<bool, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare);
    }
    check_triangular(m, side, tol)?;
    let d = m.rows();
    let scale = m.norm_inf();
    for k in 1..=d {
        for i in 0..=d - k {
            for j in 0..=d - k {
                let ok = match side {
                    Side::Upper => i <= j,
                    Side::Lower => i >= j,
                };
                if !ok {
                    continue;
                }
                let v = m.select(&range(i, k), &range(j, k))?.det();
                if !positive(&v, tol, scale.powi(k as i32)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Brute force over every structurally nonzero minor.
pub fn is_triangular_totally_positive_brute<T: Scalar>(
    m: &Mat<T>,
    side: Side,
    tol: &Tolerance,
) -> bool {
    let d = m.rows();
    let scale = m.norm_inf();
    (1..=d).all(|k| {
        (0..d).combinations(k).all(|rows| {
            (0..d).combinations(k).all(|cols| {
                if !structurally_nonzero(&rows, &cols, side) {
                    return true;
                }
                let v = m.select(&rows, &cols).expect("in range").det();
                positive(&v, tol, scale.powi(k as i32))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rational;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_i64_rows(rows)
    }

    #[test]
    fn minor_examples() {
        let id: Mat<Rational> = Mat::identity(3);
        assert_eq!(minor(&id, &[0, 1], &[0, 1]).unwrap(), Rational::from_i64(1));
        let m = q(&[&[1, 1], &[1, 2]]);
        assert_eq!(minor(&m, &[0, 1], &[0, 1]).unwrap(), Rational::from_i64(1));
        assert_eq!(minor(&m, &[0], &[1]).unwrap(), Rational::from_i64(1));
        assert!(minor(&m, &[0, 1], &[0]).is_err());
        assert!(matches!(
            minor(&m, &[2], &[0]),
            Err(NumError::IndexOutOfBounds(2))
        ));
    }

    #[test]
    fn tp_examples() {
        let tol = Tolerance::default();
        let id: Mat<Rational> = Mat::identity(3);
        assert!(!is_totally_positive(&id, &tol));
        assert!(is_totally_positive(&q(&[&[1, 1], &[1, 2]]), &tol));
        assert!(is_totally_positive(&q(&[&[2, 1], &[1, 1]]), &tol));
        // 2x2 minors of the first matrix by hand: 1, 1, 1, 2 and det 1.
        assert!(is_totally_positive_brute(&q(&[&[1, 1], &[1, 2]]), &tol));
    }

    #[test]
    fn triangular_examples() {
        let tol = Tolerance::default();
        let l = q(&[&[1, 0], &[1, 1]]);
        assert!(is_triangular_totally_positive(&l, Side::Lower, &tol).unwrap());
        // Subdiagonal entries of a lower triangular matrix are not forced to
        // vanish, so the identity is not in the positive part.
        let id: Mat<Rational> = Mat::identity(3);
        assert!(!is_triangular_totally_positive(&id, Side::Lower, &tol).unwrap());
        assert!(!is_triangular_totally_positive_brute(&id, Side::Lower, &tol));
        let bad = q(&[&[1, 0], &[-1, 1]]);
        assert!(!is_triangular_totally_positive(&bad, Side::Lower, &tol).unwrap());
        assert!(matches!(
            is_triangular_totally_positive(&l, Side::Upper, &tol),
            Err(NumError::NotTriangular)
        ));
    }

    /// Pascal-type matrices are TP; products of elementary bidiagonal factors too.
    fn bidiagonal_product(d: usize, params: &[i64], side: Side) -> Mat<Rational> {
        let mut m = Mat::identity(d);
        let mut it = params.iter().cycle();
        for _round in 0..d {
            for i in 0..d - 1 {
                let mut e: Mat<Rational> = Mat::identity(d);
                let t = Rational::from_ratio(*it.next().unwrap(), 3);
                match side {
                    Side::Upper => e[(i, i + 1)] = t,
                    Side::Lower => e[(i + 1, i)] = t,
                }
                m = m.mul(&e);
            }
        }
        m
    }

    fn random_int_matrix(d: usize) -> impl Strategy<Value = Mat<Rational>> {
        proptest::collection::vec(-3i64..9, d * d).prop_map(move |v| {
            Mat::from_fn(d, d, |r, c| Rational::from_i64(v[r * d + c]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn initial_minor_test_matches_brute_force(m in random_int_matrix(4)) {
            let tol = Tolerance::default();
            prop_assert_eq!(is_totally_positive(&m, &tol), is_totally_positive_brute(&m, &tol));
        }

        #[test]
        fn initial_minor_test_matches_brute_force_on_tp_perturbations(
            params in proptest::collection::vec(1i64..6, 6),
            i in 0usize..4, j in 0usize..4, delta in -40i64..40,
        ) {
            let tol = Tolerance::default();
            let lower = bidiagonal_product(4, &params, Side::Lower);
            let upper = bidiagonal_product(4, &params[1..], Side::Upper);
            let mut m = lower.mul(&upper);
            prop_assert!(is_totally_positive_brute(&m, &tol));
            m[(i, j)] = m[(i, j)].clone() + Rational::from_ratio(delta, 9);
            prop_assert_eq!(is_totally_positive(&m, &tol), is_totally_positive_brute(&m, &tol));
        }

        #[test]
        fn triangular_test_matches_brute_force(
            params in proptest::collection::vec(-2i64..6, 6),
            upper in any::<bool>(),
        ) {
            let tol = Tolerance::default();
            let side = if upper { Side::Upper } else { Side::Lower };
            let d = 4;
            let mut m: Mat<Rational> = Mat::identity(d);
            let mut it = params.iter();
            for r in 0..d {
                for c in r + 1..d {
                    let v = Rational::from_i64(*it.next().unwrap());
                    match side {
                        Side::Upper => m[(r, c)] = v,
                        Side::Lower => m[(c, r)] = v,
                    }
                }
            }
            prop_assert_eq!(
                is_triangular_totally_positive(&m, side, &tol).unwrap(),
                is_triangular_totally_positive_brute(&m, side, &tol)
            );
        }

        #[test]
        fn tp_is_closed_under_products(
            a in proptest::collection::vec(1i64..5, 5),
            b in proptest::collection::vec(1i64..5, 5),
            d in 2usize..=5,
        ) {
            let tol = Tolerance::default();
            let ma = bidiagonal_product(d, &a, Side::Lower).mul(&bidiagonal_product(d, &a, Side::Upper));
            let mb = bidiagonal_product(d, &b, Side::Lower).mul(&bidiagonal_product(d, &b, Side::Upper));
            prop_assert!(is_totally_positive(&ma, &tol));
            prop_assert!(is_totally_positive(&mb, &tol));
            prop_assert!(is_totally_positive(&ma.mul(&mb), &tol));
        }

        #[test]
        fn exact_and_float_signs_agree(m in random_int_matrix(3)) {
            let tol = Tolerance::default();
            let exact = m.det_sign(&tol).unwrap();
            match m.to_f64().det_sign(&tol) {
                Ok(s) => prop_assert_eq!(s, exact),
                Err(_) => prop_assert_eq!(exact, Sign::Zero),
            }
            prop_assert_eq!(is_totally_positive(&m, &tol), is_totally_positive(&m.to_f64(), &tol));
        }
    }
}
