//! Dense row-major matrices and vector helpers over any [`Scalar`].

use std::ops::{Index, IndexMut};

use super::scalar::{Scalar, Sign, Tolerance};
use super::NumError;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumError> {
        if data.len() != rows * cols {
            return Err(NumError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, NumError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(NumError::Dimension("ragged rows".into()));
        }
        Ok(Mat {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows (test and fixture convenience).
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular rows")
    }

    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self, NumError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(NumError::Dimension("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, cols, |r, c| columns[c][r].clone()))
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let d = entries.len();
        Self::from_fn(d, d, |r, c| if r == c { entries[r].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[T]) {
        for (r, x) in v.iter().enumerate() {
            self[(r, c)] = x.clone();
        }
    }

    /// Matrix made of the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Mat<T> {
        Self::from_fn(self.rows, k, |r, c| self[(r, c)].clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(parts: &[&Mat<T>]) -> Result<Mat<T>, NumError> {
        let rows = parts.iter().map(|m| m.rows).find(|&r| r > 0).unwrap_or(0);
        let mut columns = Vec::new();
        for m in parts {
            if m.cols > 0 && m.rows != rows {
                return Err(NumError::Dimension("hcat row mismatch".into()));
            }
            columns.extend(m.columns());
        }
        Self::from_columns(&columns)
    }

    pub fn transpose(&self) -> Mat<T> {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out[(r, c)].clone();
                    out[(r, c)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Mat<T>, f: impl Fn(T, T) -> T) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Converts through `f64` (lossy for exact and double-double inputs).
    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    /// Infinity norm (max row sum of absolute values) as a float.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Submatrix on the given (0-based) row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Mat<T>, NumError> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(NumError::IndexOutOfBounds(bad));
        }
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(NumError::IndexOutOfBounds(bad));
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        }))
    }

    /// Determinant by Gaussian elimination; exact on the rational backend.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let Some(p) = pivot_row(&a, k, k) else {
                return T::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det = det * pivot.clone();
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone() / pivot.clone();
                for c in k..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                    a[(r, c)] = v;
                }
            }
        }
        det
    }

    /// Sign of the determinant. Floats are judged against
    /// `eps_sign * max(1, |M|_inf)` and near-zero values are reported as ambiguous.
    pub fn det_sign(&self, tol: &Tolerance) -> Result<Sign, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare);
        }
        let det = self.det();
        let sign = det.sign(tol, self.norm_inf());
        if sign == Sign::Zero && !T::EXACT {
            return Err(NumError::AmbiguousSign {
                value: det.to_f64(),
            });
        }
        Ok(sign)
    }

    /// Solves `M x = b` with partial pivoting.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare);
        }
        if b.len() != self.rows {
            return Err(NumError::Dimension("right-hand side length".into()));
        }
        let rhs = Mat::from_columns(&[b.to_vec()])?;
        Ok(self.solve_many(&rhs)?.column(0))
    }

    pub fn solve_many(&self, b: &Mat<T>) -> Result<Mat<T>, NumError> {
        let n = self.rows;
        let m = b.cols;
        let mut a = self.clone();
        let mut x = b.clone();
        for k in 0..n {
            let p = pivot_row(&a, k, k).ok_or(NumError::Singular)?;
            if !T::EXACT && a[(p, k)].to_f64().abs() <= T::EPSILON * 1e-4 * self.max_abs() {
                return Err(NumError::Singular);
            }
            if p != k {
                a.swap_rows(p, k);
                x.swap_rows(p, k);
            }
            let pivot = a[(k, k)].clone();
            for r in 0..n {
                if r == k || a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone() / pivot.clone();
                for c in k..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                    a[(r, c)] = v;
                }
                for c in 0..m {
                    let v = x[(r, c)].clone() - f.clone() * x[(k, c)].clone();
                    x[(r, c)] = v;
                }
            }
        }
        for r in 0..n {
            let pivot = a[(r, r)].clone();
            for c in 0..m {
                let v = x[(r, c)].clone() / pivot.clone();
                x[(r, c)] = v;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<T>, NumError> {
        self.solve_many(&Mat::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Row index `>= from` with the largest nonzero entry in column `col`.
fn pivot_row<T: Scalar>(a: &Mat<T>, col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for r in from..a.rows {
        let v = &a[(r, col)];
        if v.is_zero() {
            continue;
        }
        let w = v.to_f64().abs();
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((r, w));
        }
    }
    best.map(|(r, _)| r)
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn vadd<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn vneg<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn norm_inf<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

pub fn norm2<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Euclidean unit vector (needs a square root in the backend).
pub fn normalized<T: Scalar>(a: &[T]) -> Option<Vec<T>> {
    let n = dot(a, a).sqrt()?;
    if n.is_zero() {
        return None;
    }
    Some(a.iter().map(|x| x.clone() / n.clone()).collect())
}

pub fn unit_vector<T: Scalar>(d: usize, i: usize) -> Vec<T> {
    (0..d).map(|k| if k == i { T::one() } else { T::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rational;

    #[test]
    fn det_of_small_matrices() {
        let m: Mat<Rational> = Mat::from_i64_rows(&[&[1, 1], &[1, 2]]);
        assert_eq!(m.det(), Rational::from_i64(1));
        let swap: Mat<Rational> = Mat::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(swap.det(), Rational::from_i64(-1));
    }

    #[test]
    fn det_sign_examples() {
        let tol = Tolerance::default();
        let id: Mat<Rational> = Mat::identity(3);
        assert_eq!(id.det_sign(&tol).unwrap(), Sign::Pos);
        let swap: Mat<Rational> = Mat::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(swap.det_sign(&tol).unwrap(), Sign::Neg);
        let rank_deficient: Mat<Rational> =
            Mat::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(rank_deficient.det_sign(&tol).unwrap(), Sign::Zero);
        let float_deficient: Mat<f64> = rank_deficient.to_f64();
        assert!(matches!(
            float_deficient.det_sign(&tol),
            Err(NumError::AmbiguousSign { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let id: Mat<Rational> = Mat::identity(3);
        let b: Vec<Rational> = [2, 3, 4].iter().map(|&v| Rational::from_i64(v)).collect();
        assert_eq!(id.solve(&b).unwrap(), b);
        let m: Mat<Rational> = Mat::diagonal(&[2, 1, 1].map(Rational::from_i64));
        let x = m.solve(&b).unwrap();
        assert_eq!(x, [1, 3, 4].map(Rational::from_i64).to_vec());
        let singular: Mat<Rational> = Mat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            singular.solve(&b[..2]),
            Err(NumError::Singular)
        ));
    }

    #[test]
    fn solve_recovers_constructed_solution() {
        let m: Mat<f64> = Mat::from_rows(vec![
            vec![0.3, -1.2, 2.0],
            vec![1.1, 0.4, -0.7],
            vec![-0.5, 2.2, 0.9],
        ])
        .unwrap();
        let x = vec![1.5, -0.25, 3.0];
        let b = m.mul_vec(&x);
        let got = m.solve(&b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn select_checks_bounds() {
        let m: Mat<f64> = Mat::identity(3);
        assert!(matches!(
            m.select(&[0, 3], &[0, 1]),
            Err(NumError::IndexOutOfBounds(3))
        ));
    }
}
