//! Dense square matrices over a [`Scalar`] field.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    order: usize,
    data: Vec<T>, // row-major
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(order: usize) -> Self {
        Matrix {
            order,
            data: vec![T::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                data.push(f(i, j));
            }
        }
        Matrix { order, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::NotSquare);
        }
        Ok(Matrix {
            order,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows; handy for fixtures and tests.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> ScalarKind {
        T::KIND
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.order.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.order).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            order: self.order,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> T {
        (0..self.order).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Matrix {
            order: self.order,
            data: self.data.iter().map(|x| x.clone() * factor.clone()).collect(),
        }
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.rows()
            .take(self.order)
            .map(|r| r.iter().fold(T::zero(), |acc, x| acc + x.clone()))
            .collect()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.approx_eq(&self.transpose())
    }

    /// Largest entry magnitude, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference, as `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.order, other.order, "matrix order mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality: exact for rationals, relative `1e-9` for floats.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs());
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.near(b, scale))
    }

    /// Zero test relative to `scale` (ignored for rationals).
    pub fn approx_zero(&self, scale: f64) -> bool {
        let z = T::zero();
        self.data.iter().all(|x| x.near(&z, scale))
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Inverse by Gauss-Jordan elimination with full pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        // col_of[c] = original column now sitting at position c
        let mut col_of: Vec<usize> = (0..n).collect();

        for step in 0..n {
            let (pr, pc) = a.find_pivot(step).ok_or(Error::Singular)?;
            a.swap_rows(step, pr);
            inv.swap_rows(step, pr);
            if pc != step {
                a.swap_cols(step, pc);
                col_of.swap(step, pc);
            }
            let pivot = a[(step, step)].clone();
            for j in 0..n {
                a[(step, j)] = a[(step, j)].clone() / pivot.clone();
                inv[(step, j)] = inv[(step, j)].clone() / pivot.clone();
            }
            for i in 0..n {
                if i == step || a[(i, step)].is_zero() {
                    continue;
                }
                let factor = a[(i, step)].clone();
                for j in 0..n {
                    let t = a[(step, j)].clone();
                    if !t.is_zero() {
                        a[(i, j)] = a[(i, j)].clone() - factor.clone() * t;
                    }
                    let t = inv[(step, j)].clone();
                    if !t.is_zero() {
                        inv[(i, j)] = inv[(i, j)].clone() - factor.clone() * t;
                    }
                }
            }
        }

        // Column swaps on A permute the rows of its inverse.
        let mut out = Self::zeros(n);
        for (c, &orig) in col_of.iter().enumerate() {
            for j in 0..n {
                out[(orig, j)] = inv[(c, j)].clone();
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> T {
        self.eliminate().1
    }

    /// Submatrix on the given rows and columns (both sorted index lists of equal length).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    /// Forward elimination with full pivoting; returns (rank, determinant).
    fn eliminate(&self) -> (usize, T) {
        let n = self.order;
        let mut a = self.clone();
        let mut det = T::one();
        let mut rank = 0;
        for step in 0..n {
            let Some((pr, pc)) = a.find_pivot(step) else {
                return (rank, T::zero());
            };
            if pr != step {
                a.swap_rows(step, pr);
                det = -det;
            }
            if pc != step {
                a.swap_cols(step, pc);
                det = -det;
            }
            rank += 1;
            let pivot = a[(step, step)].clone();
            det = det * pivot.clone();
            for i in step + 1..n {
                if a[(i, step)].is_zero() {
                    continue;
                }
                let factor = a[(i, step)].clone() / pivot.clone();
                for j in step..n {
                    let t = a[(step, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - factor.clone() * t;
                }
            }
        }
        (rank, det)
    }

    fn find_pivot(&self, step: usize) -> Option<(usize, usize)> {
        let n = self.order;
        let mut best: Option<(usize, usize, f64)> = None;
        for i in step..n {
            for j in step..n {
                let v = &self[(i, j)];
                if v.is_negligible() {
                    continue;
                }
                let w = v.pivot_weight();
                if best.is_none_or(|(_, _, bw)| w > bw) {
                    best = Some((i, j, w));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.order;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        let n = self.order;
        for i in 0..n {
            self.data.swap(i * n + a, i * n + b);
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Matrix {
            order: self.order,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.order + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.order + j]
    }
}

// Operator forms panic on order mismatch; use the `try_*` methods where the
// orders are not known to agree.
impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        self.try_add(rhs).expect("matrix order mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix order mismatch")
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix order mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

/// JSON form of a matrix: exact entries as strings plus decimal approximations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub order: usize,
    pub labels: Vec<String>,
    pub scalar_kind: ScalarKind,
    pub entries: Vec<Vec<String>>,
    pub decimal: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub fn new<T: Scalar>(m: &Matrix<T>, labels: &[String]) -> Self {
        MatrixDoc {
            order: m.order(),
            labels: labels.to_vec(),
            scalar_kind: T::KIND,
            entries: m
                .rows()
                .take(m.order())
                .map(|r| r.iter().map(|x| x.to_exact_string()).collect())
                .collect(),
            decimal: m
                .rows()
                .take(m.order())
                .map(|r| r.iter().map(|x| x.to_f64()).collect())
                .collect(),
        }
    }
}

/// CSV export of the decimal form, with a label header row and a label column.
pub fn to_csv<T: Scalar>(m: &Matrix<T>, labels: &[String]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for (i, row) in m.rows().take(m.order()).enumerate() {
        let mut rec = vec![labels.get(i).cloned().unwrap_or_default()];
        rec.extend(row.iter().map(|x| format!("{}", x.to_f64())));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Consistency(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn rat_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |v| {
            let mut it = v.into_iter();
            Matrix::from_fn(n, |_, _| {
                let (p, q) = it.next().unwrap();
                rational(p, q)
            })
        })
    }

    #[test]
    fn identity_inverse_and_rank() {
        let i = Matrix::<Rational>::identity(4);
        assert_eq!(i.inverse().unwrap(), i);
        assert_eq!(Matrix::<Rational>::zeros(4).rank(), 0);
        assert_eq!(i.det(), integer(1));
    }

    #[test]
    fn singular_is_detected() {
        let m = Matrix::<Rational>::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::Singular)));
        assert_eq!(m.rank(), 1);
        assert_eq!(m.det(), integer(0));
        let f = m.map(|x| x.to_f64());
        assert!(matches!(f.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn needs_column_pivoting() {
        // Leading column is zero; full pivoting has to move a column.
        let m = Matrix::<Rational>::from_i64_rows(&[&[0, 1, 2], &[0, 3, 1], &[5, 0, 0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        assert_eq!(m.det(), integer(-25));
        let f = m.map(|x| x.to_f64());
        let finv = f.inverse().unwrap();
        assert!((&f * &finv).approx_eq(&Matrix::identity(3)));
        assert!((f.det() + 25.0).abs() < 1e-12);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Matrix::<Rational>::identity(2);
        let b = Matrix::<Rational>::identity(3);
        assert!(matches!(a.try_mul(&b), Err(Error::OrderMismatch(2, 3))));
        assert!(matches!(a.try_add(&b), Err(Error::OrderMismatch(2, 3))));
        assert!(Matrix::<Rational>::from_rows(vec![vec![integer(1)], vec![]]).is_err());
    }

    #[test]
    fn json_and_csv_carry_both_forms() {
        let m = Matrix::from_rows(vec![
            vec![rational(8, 25), integer(1)],
            vec![integer(0), rational(-1, 4)],
        ])
        .unwrap();
        let labels = vec!["a".to_string(), "b".to_string()];
        let doc = MatrixDoc::new(&m, &labels);
        assert_eq!(doc.entries[0][0], "8/25");
        assert_eq!(doc.decimal[0][0], 0.32);
        let back: MatrixDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        let csv = to_csv(&m, &labels).unwrap();
        assert_eq!(csv, ",a,b\na,0.32,1\nb,0,-0.25\n");
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[0, 2]]).unwrap();
        let mut p = Matrix::identity(2);
        for _ in 0..5 {
            p = &p * &m;
        }
        assert_eq!(m.pow(5), p);
        assert_eq!(m.pow(0), Matrix::identity(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn identity_is_neutral(a in rat_matrix(4)) {
            let i = Matrix::identity(4);
            prop_assert_eq!(&i * &a, a.clone());
            prop_assert_eq!(&a * &i, a);
        }

        #[test]
        fn trace_and_transpose_identities(a in rat_matrix(4), b in rat_matrix(4)) {
            prop_assert_eq!((&a * &b).trace(), (&b * &a).trace());
            prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
        }

        #[test]
        fn exact_inverse_round_trips(a in rat_matrix(5)) {
            prop_assume!(!a.det().is_zero());
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, Matrix::identity(5));
            prop_assert_eq!(&inv * &a, Matrix::identity(5));
            prop_assert_eq!(inv.inverse().unwrap(), a);
        }

        #[test]
        fn float_mode_tracks_rational_mode(a in rat_matrix(4)) {
            prop_assume!(!a.det().is_zero());
            let f = a.map(|x| x.to_f64());
            // condition proxy: keep instances where every float pivot is sizeable
            prop_assume!(f.det().abs() > 1e-6);
            let exact = a.inverse().unwrap().map(|x| x.to_f64());
            let approx = f.inverse().unwrap();
            prop_assume!(exact.max_abs() < 1e6);
            prop_assert!(exact.max_abs_diff(&approx) < 1e-9 * exact.max_abs().max(1.0));
            prop_assert!((a.det().to_f64() - f.det()).abs() < 1e-9 * a.det().to_f64().abs().max(1.0));
        }
    }
}
