//! The positive semidefinite square root, an independent Denman–Beavers
//! route to it, and commutation propagation `BA = AB => B sqrt(A) = sqrt(A) B`.

use crate::eigen::{eigh, sim_diag_commuting, EigenDecomposition};
use crate::error::{Error, Result, Witness};
use crate::hermitian::{cartesian_parts, HermitianMatrix};
use crate::matrix::{commutator_norm, ComplexMatrix};
use crate::oracles::spectral_norm_estimate;
use crate::tolerance::Tolerances;

/// Relative shift applied before Denman–Beavers on (near-)singular input.
pub const DB_SHIFT: f64 = 1e-10;

/// Denman–Beavers also stops once `|M - I|_F` is below this and no longer
/// shrinking, i.e. the iteration has hit its rounding floor above `conv`.
pub const DB_STALL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SqrtResult {
    pub root: HermitianMatrix,
    /// Sum of the magnitudes of the negative eigenvalues clipped to zero.
    pub clipped_mass: f64,
}

/// Fails with `NotPsd` when the smallest eigenvalue lies below
/// `-psd * |A|_2`.
pub(crate) fn require_psd(e: &EigenDecomposition, tol: &Tolerances) -> Result<()> {
    let floor = -tol.psd * e.spectral_norm();
    if e.min() < floor {
        let last = e.dim() - 1;
        return Err(Error::NotPsd {
            witness: Witness {
                eigenvalue: e.min(),
                vector: e.vector(last),
            },
        });
    }
    Ok(())
}

/// `U diag(sqrt(max(lambda, 0))) U*` from the Jacobi eigendecomposition.
pub fn psd_sqrt(a: &HermitianMatrix, tol: &Tolerances) -> Result<SqrtResult> {
    let e = eigh(a, tol)?;
    require_psd(&e, tol)?;
    Ok(sqrt_from_eigen(&e))
}

pub(crate) fn sqrt_from_eigen(e: &EigenDecomposition) -> SqrtResult {
    let clipped_mass = e
        .values
        .iter()
        .filter(|&&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l);
    SqrtResult {
        root: e.map(|l| l.max(0.0).sqrt()),
        clipped_mass,
    }
}

/// Output of the Denman–Beavers iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DenmanBeavers {
    /// Approximates `sqrt(A + shift I)`.
    pub root: HermitianMatrix,
    /// `0` for comfortably nonsingular input, else `DB_SHIFT * max(1, |A|_2)`.
    pub shift: f64,
    pub iterations: usize,
}

/// Square root by the product form of the coupled Denman–Beavers iteration
/// with determinant scaling. From `Y = M = A + shift I`,
///
/// ```text
/// mu = |det M|^(-1/(2n))
/// Y <- mu Y (I + mu^-2 M^-1) / 2
/// M <- (I + (mu^2 M + mu^-2 M^-1) / 2) / 2
/// ```
///
/// so that `M -> I` and `Y -> sqrt(A + shift I)`. Scaling by `mu` brings the
/// spectrum of `M` onto the unit circle in geometric mean, which keeps the
/// count of iterations small and stops rounding errors from the tiny
/// eigenvalues of shifted singular input being amplified.
///
/// Uses no eigendecomposition on the success path: PSD-ness and the
/// singularity test are Cholesky probes, and the norm scale comes from power
/// iteration.
pub fn denman_beavers_sqrt(a: &HermitianMatrix, tol: &Tolerances) -> Result<DenmanBeavers> {
    let m0 = a.as_matrix();
    let scale = 1f64.max(spectral_norm_estimate(m0));
    // Slightly generous floor so the probe never rejects what psd_sqrt accepts.
    if !m0.shifted(2.0 * tol.psd * scale).cholesky_succeeds() {
        let e = eigh(a, tol)?;
        require_psd(&e, tol)?;
    }
    let delta = DB_SHIFT * scale;
    let shift = if m0.shifted(-delta).cholesky_succeeds() {
        0.0
    } else {
        delta
    };

    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let mut y = m0.shifted(shift);
    let mut m = y.clone();
    let cap = 4 * tol.max_sweeps;
    let mut last = f64::INFINITY;
    for k in 1..=cap {
        let lu = m.lu();
        if lu.is_singular() {
            return Err(Error::SingularIteration);
        }
        let m_inv = lu.inverse().ok_or(Error::SingularIteration)?;
        let mu = (-lu.log_abs_determinant() / (2 * n) as f64).exp();
        let mu2 = mu * mu;
        if !mu2.is_finite() || mu2 == 0.0 {
            return Err(Error::SingularIteration);
        }
        let m_inv = m_inv.scale_real(1.0 / mu2);
        y = (&y * &(&id + &m_inv)).scale_real(0.5 * mu);
        m = (&id + &(&m.scale_real(mu2) + &m_inv).scale_real(0.5)).scale_real(0.5);
        let deviation = (&m - &id).frobenius_norm();
        let stalled = deviation <= DB_STALL && deviation >= last;
        last = deviation;
        if deviation <= tol.conv || stalled {
            return Ok(DenmanBeavers {
                root: HermitianMatrix::symmetrized(y),
                shift,
                iterations: k,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cap,
        residual: last,
    })
}

/// `|B sqrt(A) - sqrt(A) B|_F` for `B` commuting with PSD `A`.
pub fn sqrt_commutes(a: &HermitianMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    check_commuting(a, b, tol)?;
    let root = psd_sqrt(a, tol)?.root;
    commutator_norm(b, root.as_matrix())
}

/// Commutator norms of `Re B` and `Im B` with `sqrt(A)`, where for each
/// Hermitian part a shared unitary `U` diagonalizes both `A = U E U*` and the
/// part, and `sqrt(A)` is rebuilt as `U sqrt(E) U*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartsCommutation {
    pub real_part: f64,
    pub imag_part: f64,
}

pub fn sqrt_commutes_by_parts(
    a: &HermitianMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<PartsCommutation> {
    check_commuting(a, b, tol)?;
    require_psd(&eigh(a, tol)?, tol)?;
    let (re, im) = cartesian_parts(b);
    let mut norms = [0.0; 2];
    for (slot, part) in norms.iter_mut().zip([&re, &im]) {
        let sd = sim_diag_commuting(a, part, tol)?;
        let e = EigenDecomposition {
            vectors: sd.unitary,
            values: sd.first,
        };
        let root = e.map(|l| l.max(0.0).sqrt());
        *slot = commutator_norm(part.as_matrix(), root.as_matrix())?;
    }
    Ok(PartsCommutation {
        real_part: norms[0],
        imag_part: norms[1],
    })
}

fn check_commuting(a: &HermitianMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let norm = commutator_norm(a.as_matrix(), b)?;
    let bound = tol.eq * 1f64.max(a.frobenius_norm() * b.frobenius_norm());
    if norm > bound {
        return Err(Error::NotCommuting { norm, bound });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_equal;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn two_one() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()
    }

    #[test]
    fn identity_and_diagonal() {
        let r = psd_sqrt(&HermitianMatrix::identity(3), &tol()).unwrap();
        assert_eq!(r.root, HermitianMatrix::identity(3));
        assert_eq!(r.clipped_mass, 0.0);

        let r = psd_sqrt(&HermitianMatrix::from_diag(&[4.0, 9.0]), &tol()).unwrap();
        assert_eq!(r.root, HermitianMatrix::from_diag(&[2.0, 3.0]));
    }

    #[test]
    fn two_by_two_closed_form() {
        let s3 = 3f64.sqrt();
        let expected = ComplexMatrix::from_real_rows(&[
            &[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0],
            &[(s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0],
        ])
        .unwrap();
        let r = psd_sqrt(&two_one(), &tol()).unwrap();
        assert!(matrix_equal(r.root.as_matrix(), &expected, 1e-15).unwrap());
        assert!((r.root.as_matrix()[(0, 0)].re - 1.36603).abs() < 1e-5);

        let db = denman_beavers_sqrt(&two_one(), &tol()).unwrap();
        assert_eq!(db.shift, 0.0);
        assert!(matrix_equal(db.root.as_matrix(), &expected, 100.0 * tol().eq).unwrap());
    }

    #[test]
    fn rejects_indefinite_with_witness() {
        let a = HermitianMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        match psd_sqrt(&a, &tol()) {
            Err(Error::NotPsd { witness }) => {
                assert!((witness.eigenvalue + 1.0).abs() < 1e-14);
                let r = std::f64::consts::FRAC_1_SQRT_2;
                assert!((witness.vector[0].re.abs() - r).abs() < 1e-14);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
        assert!(matches!(
            denman_beavers_sqrt(&a, &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn clips_tiny_negative_eigenvalues() {
        let a = HermitianMatrix::from_diag(&[1.0, -1e-12]);
        let r = psd_sqrt(&a, &tol()).unwrap();
        assert_eq!(r.clipped_mass, 1e-12);
        assert_eq!(r.root, HermitianMatrix::from_diag(&[1.0, 0.0]));
    }

    #[test]
    fn denman_beavers_scalar() {
        let db = denman_beavers_sqrt(&HermitianMatrix::from_diag(&[4.0, 4.0]), &tol()).unwrap();
        assert!(matrix_equal(
            db.root.as_matrix(),
            &ComplexMatrix::from_diag(&[2.0, 2.0]),
            1e-14
        )
        .unwrap());
    }

    #[test]
    fn denman_beavers_singular_uses_shift() {
        let a = HermitianMatrix::from_diag(&[1.0, 0.0]);
        let db = denman_beavers_sqrt(&a, &tol()).unwrap();
        assert_eq!(db.shift, DB_SHIFT);
        let sd = db.shift.sqrt();
        let expected = ComplexMatrix::from_diag(&[(1.0 + db.shift).sqrt(), sd]);
        assert!(matrix_equal(db.root.as_matrix(), &expected, 1e-9).unwrap());
        let direct = psd_sqrt(&a, &tol()).unwrap().root;
        let bound = 2.0 * sd + 100.0 * tol().eq;
        assert!(matrix_equal(db.root.as_matrix(), direct.as_matrix(), bound).unwrap());
    }

    #[test]
    fn commutation_examples() {
        let t = tol();
        let any = ComplexMatrix::from_rows(&[
            &[
                num_complex::Complex64::new(1.0, 2.0),
                num_complex::Complex64::new(0.0, -1.0),
            ],
            &[
                num_complex::Complex64::new(3.0, 0.0),
                num_complex::Complex64::new(0.5, 0.5),
            ],
        ])
        .unwrap();
        assert!(sqrt_commutes(&HermitianMatrix::identity(2), &any, &t).unwrap() < 1e-14);

        let a = HermitianMatrix::from_diag(&[1.0, 4.0]);
        let b = ComplexMatrix::from_diag(&[5.0, 6.0]);
        assert_eq!(sqrt_commutes(&a, &b, &t).unwrap(), 0.0);

        // B = A - 2I commutes with A.
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(commutator_norm(two_one().as_matrix(), &swap).unwrap(), 0.0);
        let bound =
            100.0 * t.eq * 1f64.max(two_one().frobenius_norm().sqrt() * swap.frobenius_norm());
        assert!(sqrt_commutes(&two_one(), &swap, &t).unwrap() <= bound);

        let parts = sqrt_commutes_by_parts(&two_one(), &swap, &t).unwrap();
        assert!(parts.real_part <= bound && parts.imag_part <= bound);
    }

    #[test]
    fn commutation_precondition_is_checked() {
        let a = HermitianMatrix::from_diag(&[1.0, 4.0]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            sqrt_commutes(&a, &b, &tol()),
            Err(Error::NotCommuting { .. })
        ));
        assert!(matches!(
            sqrt_commutes_by_parts(&a, &b, &tol()),
            Err(Error::NotCommuting { .. })
        ));
    }
}
