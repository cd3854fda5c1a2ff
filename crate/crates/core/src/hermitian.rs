use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dot, vec_norm, ComplexMatrix};
use crate::tolerance::Tolerances;

/// A validated self-adjoint matrix.
///
/// Construction accepts input within `herm * max(1, |M|_F)` of Hermitian and
/// then makes it exactly Hermitian: the lower triangle is overwritten with the
/// conjugate of the upper triangle and the diagonal is made real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let residual = (&m - &m.adjoint()).frobenius_norm();
        let bound = tol.herm * 1f64.max(m.frobenius_norm());
        if residual > bound {
            return Err(Error::NotHermitian { residual, bound });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without validation. For matrices that are Hermitian up to
    /// rounding by construction.
    pub(crate) fn symmetrized(mut m: ComplexMatrix) -> Self {
        let n = m.dim();
        for i in 0..n {
            m.at_mut(i, i).im = 0.0;
            for j in i + 1..n {
                let upper = m[(i, j)];
                // `0.0 - im` rather than `-im` keeps a zero imaginary part positive.
                *m.at_mut(j, i) = Complex64::new(upper.re, 0.0 - upper.im);
            }
        }
        HermitianMatrix { inner: m }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?, &Tolerances::default())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        HermitianMatrix {
            inner: ComplexMatrix::from_diag(diag),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix {
            inner: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            inner: ComplexMatrix::zeros(n),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix {
            inner: self.inner.scale_real(c),
        }
    }

    pub fn shifted(&self, shift: f64) -> Self {
        HermitianMatrix {
            inner: self.inner.shifted(shift),
        }
    }

    pub fn checked_add(&self, other: &HermitianMatrix) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self::symmetrized(&self.inner + &other.inner))
    }

    pub fn checked_sub(&self, other: &HermitianMatrix) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self::symmetrized(&self.inner - &other.inner))
    }

    /// `X* self X` for a square `X` of matching dimension.
    pub fn congruence(&self, x: &ComplexMatrix) -> Result<Self> {
        let left = x.adjoint().checked_mul(&self.inner)?;
        Ok(Self::symmetrized(&left * x))
    }
}

fn check_dims(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `Re <Ax, x>`. The imaginary part is rounding noise for Hermitian `A` and
/// is dropped.
pub fn quadratic_form(a: &HermitianMatrix, x: &[Complex64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    let ax = a.as_matrix().mul_vec(x);
    let value = dot(x, &ax);
    debug_assert!(
        value.im.abs()
            <= Tolerances::default().eq * a.frobenius_norm() * vec_norm(x).powi(2)
                + f64::MIN_POSITIVE,
        "quadratic form of a Hermitian matrix has imaginary part {:e}",
        value.im
    );
    Ok(value.re)
}

/// Splits `T = Re T + i Im T` with `Re T = (T + T*)/2` and
/// `Im T = (T - T*)/(2i)`, both Hermitian.
pub fn cartesian_parts(t: &ComplexMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let adj = t.adjoint();
    let re = (t + &adj).scale_real(0.5);
    // 1/(2i) = -i/2
    let im = (t - &adj).scale(Complex64::new(0.0, -0.5));
    (
        HermitianMatrix::symmetrized(re),
        HermitianMatrix::symmetrized(im),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_equal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_symmetrizes_small_defects() {
        let tol = Tolerances::default();
        let m = ComplexMatrix::from_rows(&[
            &[c(1.0, 1e-13), c(2.0, 1.0)],
            &[c(2.0, -1.0 + 1e-12), c(3.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m, &tol).unwrap();
        assert_eq!(h.as_matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(h.as_matrix()[(1, 0)], c(2.0, -1.0));

        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(bad, &tol),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn quadratic_form_examples() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(
            quadratic_form(&i2, &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap(),
            2.0
        );

        let z = HermitianMatrix::zeros(2);
        assert_eq!(
            quadratic_form(&z, &[c(3.0, -1.0), c(0.5, 2.0)]).unwrap(),
            0.0
        );

        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert_eq!(
            quadratic_form(&a, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
            6.0
        );

        assert!(matches!(
            quadratic_form(&a, &[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn cartesian_parts_examples() {
        let it = ComplexMatrix::scalar(2, c(0.0, 1.0));
        let (re, im) = cartesian_parts(&it);
        assert_eq!(re, HermitianMatrix::zeros(2));
        assert_eq!(im, HermitianMatrix::identity(2));

        let h =
            ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(2.0, 3.0)], &[c(2.0, -3.0), c(-4.0, 0.0)]])
                .unwrap();
        let (re, im) = cartesian_parts(&h);
        assert_eq!(re.as_matrix(), &h);
        assert_eq!(im, HermitianMatrix::zeros(2));

        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let (re, im) = cartesian_parts(&t);
        let expected_re = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        let expected_im =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -0.5)], &[c(0.0, 0.5), c(0.0, 0.0)]])
                .unwrap();
        assert_eq!(re.as_matrix(), &expected_re);
        assert_eq!(im.as_matrix(), &expected_im);
        let rebuilt = re.as_matrix() + &im.as_matrix().scale(c(0.0, 1.0));
        assert!(matrix_equal(&rebuilt, &t, 1e-15).unwrap());
    }
}
