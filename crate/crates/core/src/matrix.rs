//! Dense square complex matrices.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `n x n` complex matrix stored row-major. Every entry is finite.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from `n * n` row-major entries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(ComplexMatrix { n, data })
    }

    /// Builds a matrix from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(n, data)
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    pub fn scalar(n: usize, value: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = value;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Assembles a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let n = columns.len();
        let mut m = Self::zeros(n);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length must equal column count");
            for (i, &z) in col.iter().enumerate() {
                m.data[i * n + j] = z;
            }
        }
        m
    }

    pub(crate) fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.data[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += shift;
        }
        m
    }

    pub fn checked_mul(&self, other: &ComplexMatrix) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(self * other)
    }

    pub fn checked_sub(&self, other: &ComplexMatrix) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(self - other)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Lu {
        Lu::factor(self)
    }

    /// Inverse via partial-pivoting LU, `None` when a pivot vanishes relative
    /// to the matrix scale.
    pub fn inverse(&self) -> Option<ComplexMatrix> {
        self.lu().inverse()
    }

    pub fn determinant(&self) -> Complex64 {
        self.lu().determinant()
    }

    /// Whether a Cholesky factorization built from the lower triangle exists,
    /// i.e. whether every pivot stays strictly positive.
    pub fn cholesky_succeeds(&self) -> bool {
        let n = self.n;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) {
                return false;
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        true
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for row in self.data.chunks_exact(self.n) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    Ok(())
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { n, data: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

/// Partial-pivoting LU factors `P A = L U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    packed: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl Lu {
    fn factor(a: &ComplexMatrix) -> Lu {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let tiny = n as f64 * f64::EPSILON * a.max_abs();
        let mut singular = a.max_abs() == 0.0;
        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmag <= tiny {
                singular = true;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Lu {
            n,
            packed: lu,
            perm,
            swaps,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut det: Complex64 = (0..n).map(|i| self.packed[i * n + i]).product();
        if self.swaps % 2 == 1 {
            det = -det;
        }
        det
    }

    /// `ln |det A|` from the pivots, safe where the determinant itself would
    /// overflow or underflow.
    pub fn log_abs_determinant(&self) -> f64 {
        let n = self.n;
        (0..n).map(|i| self.packed[i * n + i].norm().ln()).sum()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.packed[i * n + k] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.packed[i * n + k] * x[k];
            }
            x[i] = s / self.packed[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> Option<ComplexMatrix> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut e = vec![ZERO; n];
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = ZERO);
            e[j] = ONE;
            cols.push(self.solve(&e));
        }
        let inv = ComplexMatrix::from_columns(&cols);
        inv.data.iter().all(|z| z.is_finite()).then_some(inv)
    }
}

/// `sum_i conj(x_i) y_i`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of the commutator `XY - YX`.
pub fn commutator_norm(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    check_same_dim(x, y)?;
    Ok((&(x * y) - &(y * x)).frobenius_norm())
}

/// `|X - Y|_F <= tol * max(1, |X|_F, |Y|_F)`.
pub fn matrix_equal(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Result<bool> {
    check_same_dim(x, y)?;
    let scale = 1f64.max(x.frobenius_norm()).max(y.frobenius_norm());
    Ok((x - y).frobenius_norm() <= tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_checks() {
        assert_eq!(ComplexMatrix::new(0, vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(
            ComplexMatrix::new(2, vec![ONE; 3]),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
        assert_eq!(
            ComplexMatrix::new(2, vec![ONE, ONE, c(f64::NAN, 0.0), ONE]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
    }

    #[test]
    fn commutator_examples() {
        let x = ComplexMatrix::from_diag(&[1.0, 2.0]);
        let y = ComplexMatrix::from_diag(&[3.0, 4.0]);
        assert_eq!(commutator_norm(&x, &y).unwrap(), 0.0);

        let i = ComplexMatrix::identity(2);
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(commutator_norm(&i, &nil).unwrap(), 0.0);
        // XY - YX = [[0,1],[0,0]] * (1 - 2) for X = diag(1,2).
        assert_eq!(commutator_norm(&x, &nil).unwrap(), 1.0);

        let three = ComplexMatrix::identity(3);
        assert!(commutator_norm(&x, &three).is_err());
    }

    #[test]
    fn equality_examples() {
        let i = ComplexMatrix::identity(2);
        assert!(matrix_equal(&i, &i, 1e-12).unwrap());
        assert!(!matrix_equal(&i, &i.scale_real(2.0), 1e-12).unwrap());
        let mut bumped = i.clone();
        *bumped.at_mut(0, 0) += 1e-14;
        assert!(matrix_equal(&i, &bumped, 1e-12).unwrap());
    }

    #[test]
    fn lu_inverse_and_determinant() {
        let a = ComplexMatrix::from_rows(&[
            &[c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            &[c(1.0, -1.0), c(3.0, 0.0), c(0.0, 2.0)],
            &[c(0.0, 0.0), c(0.0, -2.0), c(5.0, 0.0)],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(matrix_equal(&(&a * &inv), &ComplexMatrix::identity(3), 1e-14).unwrap());
        // cofactor expansion: 2*(15-4) - (1+i)*((1-i)*5 - 0) = 22 - 10 = 12
        let det = a.determinant();
        assert!((det - c(12.0, 0.0)).norm() < 1e-12);

        let singular = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(singular.inverse().is_none());
        assert!(ComplexMatrix::zeros(2).inverse().is_none());
    }

    #[test]
    fn cholesky_probe() {
        let pd = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(pd.cholesky_succeeds());
        let indef = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(!indef.cholesky_succeeds());
        assert!(!ComplexMatrix::from_diag(&[1.0, 0.0]).cholesky_succeeds());
    }

    #[test]
    fn adjoint_and_trace() {
        let a =
            ComplexMatrix::from_rows(&[&[c(1.0, 2.0), c(3.0, 4.0)], &[c(5.0, 6.0), c(7.0, 8.0)]])
                .unwrap();
        let h = a.adjoint();
        assert_eq!(h[(0, 1)], c(5.0, -6.0));
        assert_eq!(h[(1, 1)], c(7.0, -8.0));
        assert_eq!(a.trace(), c(8.0, 10.0));
    }
}
