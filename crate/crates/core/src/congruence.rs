//! Simultaneous congruence diagonalization of a PSD pair: an invertible `P`
//! with `P* A P` and `P* B P` both diagonal.
//!
//! `A + B` is whitened on its range, the whitened `A` is diagonalized by one
//! unitary, and the common kernel of `A` and `B` is appended unscaled. On the
//! range the two diagonals are complementary (`d1 + d2 = 1`); on the common
//! kernel both vanish.
//!
//! Factorizations of the form `A = Q* D1 Q` correspond to `Q = P^-1`;
//! [`reconstruct`] evaluates that form.

use num_complex::Complex64;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::matrix::{dot, ComplexMatrix, ZERO};
use crate::order::{is_psd, RANK_TOLERANCE};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceResult {
    pub p: ComplexMatrix,
    /// Diagonal of `P* A P`.
    pub d1: Vec<f64>,
    /// Diagonal of `P* B P`.
    pub d2: Vec<f64>,
    /// `sigma_max(P) / sigma_min(P)`, infinite if `P* P` is not positive
    /// definite to working precision.
    pub cond_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

impl CongruenceResult {
    pub fn diagonal(&self, which: Which) -> &[f64] {
        match which {
            Which::A => &self.d1,
            Which::B => &self.d2,
        }
    }

    /// `|P* M P - diag(d)|_F`, the off-diagonal mass left by `P`.
    pub fn residual(&self, m: &HermitianMatrix, which: Which) -> Result<f64> {
        let transformed = m.congruence(&self.p)?;
        let diag = ComplexMatrix::from_diag(self.diagonal(which));
        Ok((transformed.as_matrix() - &diag).frobenius_norm())
    }
}

/// Finds `P` with `P* A P = diag(d1)` and `P* B P = diag(d2)` for PSD `A`, `B`.
///
/// Columns are ordered by `d1` descending, ties by `d2` descending.
pub fn congruence_diag(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<CongruenceResult> {
    for m in [a, b] {
        if let Some(witness) = is_psd(m, tol)?.witness {
            return Err(Error::NotPsd { witness });
        }
    }
    let sum = a.checked_add(b)?;
    let n = a.dim();
    let es = eigh(&sum, tol)?;
    let cut = RANK_TOLERANCE * es.spectral_norm();
    let r = es.values.iter().take_while(|&&s| s > cut).count();

    let whitened: Vec<Vec<Complex64>> = (0..r)
        .map(|j| {
            let f = 1.0 / es.values[j].sqrt();
            es.vector(j).into_iter().map(|z| z * f).collect()
        })
        .collect();

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    if r > 0 {
        let am = a.as_matrix();
        let aw: Vec<Vec<Complex64>> = whitened.iter().map(|w| am.mul_vec(w)).collect();
        let compressed = ComplexMatrix::from_fn(r, |i, j| dot(&whitened[i], &aw[j]));
        let em = eigh(&HermitianMatrix::symmetrized(compressed), tol)?;
        for j in 0..r {
            let mut col = vec![ZERO; n];
            for (i, w) in whitened.iter().enumerate() {
                let q = em.vectors[(i, j)];
                for (c, z) in col.iter_mut().zip(w) {
                    *c += z * q;
                }
            }
            columns.push(col);
        }
    }
    columns.extend((r..n).map(|j| es.vector(j)));

    let rayleigh = |m: &HermitianMatrix, v: &[Complex64]| dot(v, &m.as_matrix().mul_vec(v)).re;
    let raw1: Vec<f64> = columns.iter().map(|v| rayleigh(a, v)).collect();
    let raw2: Vec<f64> = columns.iter().map(|v| rayleigh(b, v)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw1[j]
            .total_cmp(&raw1[i])
            .then(raw2[j].total_cmp(&raw2[i]))
    });
    let sorted: Vec<Vec<Complex64>> = order.iter().map(|&j| columns[j].clone()).collect();
    let p = ComplexMatrix::from_columns(&sorted);

    let gram = eigh(&HermitianMatrix::symmetrized(&p.adjoint() * &p), tol)?;
    let cond_estimate = if gram.min() > 0.0 {
        (gram.max() / gram.min()).sqrt()
    } else {
        f64::INFINITY
    };

    Ok(CongruenceResult {
        p,
        d1: order.iter().map(|&j| raw1[j]).collect(),
        d2: order.iter().map(|&j| raw2[j]).collect(),
        cond_estimate,
    })
}

/// Recovers `P^-* diag(d) P^-1`, the input matrix selected by `which`.
pub fn reconstruct(result: &CongruenceResult, which: Which) -> Result<HermitianMatrix> {
    if !result.cond_estimate.is_finite() {
        return Err(Error::SingularP);
    }
    let inv = result.p.inverse().ok_or(Error::SingularP)?;
    let d = HermitianMatrix::from_diag(result.diagonal(which));
    d.congruence(&inv)
}

/// `A >= B` read off the diagonals: `d1_i >= d2_i - psd * scale` for all `i`,
/// with `scale = max(1, max |d|)`.
pub fn order_via_diagonals(result: &CongruenceResult, tol: &Tolerances) -> bool {
    let scale = result
        .d1
        .iter()
        .chain(&result.d2)
        .fold(1f64, |m, x| m.max(x.abs()));
    result
        .d1
        .iter()
        .zip(&result.d2)
        .all(|(x, y)| *x >= *y - tol.psd * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_equal;
    use crate::order::loewner_geq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_pair_matches_hand_evaluation() {
        // S = diag(2, 3), so P = diag(1/sqrt 2, 1/sqrt 3).
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::from_diag(&[1.0, 2.0]);
        let r = congruence_diag(&a, &b, &tol()).unwrap();
        let (h, t) = (0.5, 1.0 / 3.0);
        assert!((r.d1[0] - h).abs() < 1e-15 && (r.d1[1] - t).abs() < 1e-15);
        assert!((r.d2[0] - h).abs() < 1e-15 && (r.d2[1] - 2.0 * t).abs() < 1e-15);
        assert!((r.p[(0, 0)].norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r.p[(1, 1)].norm() - t.sqrt()).abs() < 1e-15);
        assert!(r.p[(0, 1)].norm() < 1e-15 && r.p[(1, 0)].norm() < 1e-15);

        let back_a = reconstruct(&r, Which::A).unwrap();
        let back_b = reconstruct(&r, Which::B).unwrap();
        assert!(matrix_equal(back_a.as_matrix(), a.as_matrix(), 1e-14).unwrap());
        assert!(matrix_equal(back_b.as_matrix(), b.as_matrix(), 1e-14).unwrap());

        // diag(1,2) >= I, both via diagonals and directly.
        let r = congruence_diag(&b, &a, &tol()).unwrap();
        assert!(order_via_diagonals(&r, &tol()));
        assert!(loewner_geq(&b, &a, &tol()).unwrap().holds());
    }

    #[test]
    fn zero_pair() {
        let z = HermitianMatrix::zeros(3);
        let r = congruence_diag(&z, &z, &tol()).unwrap();
        assert_eq!(r.p, ComplexMatrix::identity(3));
        assert_eq!(r.d1, vec![0.0; 3]);
        assert_eq!(r.d2, vec![0.0; 3]);
        assert_eq!(r.cond_estimate, 1.0);
        assert_eq!(reconstruct(&r, Which::A).unwrap(), z);
        assert!(order_via_diagonals(&r, &tol()));
    }

    #[test]
    fn complementary_diagonals() {
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let b = HermitianMatrix::identity(2);
        let r = congruence_diag(&a, &b, &tol()).unwrap();
        for (x, y) in r.d1.iter().zip(&r.d2) {
            assert!((x + y - 1.0).abs() < 1e-14);
            assert!(*x >= 0.0 && *y >= 0.0);
        }
        assert!(r.residual(&a, Which::A).unwrap() < 1e-14);
        assert!(r.residual(&b, Which::B).unwrap() < 1e-14);
    }

    #[test]
    fn incomparable_pair() {
        let a = HermitianMatrix::from_diag(&[1.0, 0.0]);
        let b = HermitianMatrix::from_diag(&[0.0, 1.0]);
        let r = congruence_diag(&a, &b, &tol()).unwrap();
        assert!(!order_via_diagonals(&r, &tol()));
        let r = congruence_diag(&a, &a, &tol()).unwrap();
        assert!(order_via_diagonals(&r, &tol()));
    }

    #[test]
    fn common_kernel_is_kept() {
        let a = HermitianMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let b = HermitianMatrix::from_diag(&[0.0, 2.0, 0.0]);
        let r = congruence_diag(&a, &b, &tol()).unwrap();
        assert_eq!(r.d1[2], 0.0);
        assert_eq!(r.d2[2], 0.0);
        assert!(r.cond_estimate.is_finite());
        assert!(matrix_equal(
            reconstruct(&r, Which::B).unwrap().as_matrix(),
            b.as_matrix(),
            1e-14
        )
        .unwrap());
    }

    #[test]
    fn rejects_indefinite_input() {
        let a = HermitianMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(
            congruence_diag(&a, &HermitianMatrix::identity(2), &tol()),
            Err(Error::NotPsd { .. })
        ));
    }
}
