//! Loewner-order predicates with eigenpair certificates, square-root
//! monotonicity, and the rank/det/trace/inverse corollaries.

use std::fmt;

use crate::eigen::{eigh, EigenDecomposition};
use crate::error::{Error, Hypothesis, Result, Witness};
use crate::hermitian::HermitianMatrix;
use crate::matrix::matrix_equal;
use crate::sqrtm::sqrt_from_eigen;
use crate::tolerance::Tolerances;

/// Rank cut, relative to the spectral norm.
pub const RANK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Geq,
    NotGeq,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Geq => f.write_str("GEQ"),
            Verdict::NotGeq => f.write_str("NOT_GEQ"),
        }
    }
}

/// Outcome of testing `D >= 0` for a Hermitian `D` (usually `A - B`).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderCertificate {
    pub verdict: Verdict,
    /// Smallest eigenvalue of `D`.
    pub min_eig: f64,
    /// `psd * max(1, |D|_2)`: `GEQ` iff `min_eig >= -threshold`.
    pub threshold: f64,
    /// Most negative eigenpair of `D`, present iff `NotGeq`.
    pub witness: Option<Witness>,
}

impl OrderCertificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Geq
    }

    fn from_eigen(e: &EigenDecomposition, tol: &Tolerances) -> Self {
        let threshold = tol.psd * 1f64.max(e.spectral_norm());
        let min_eig = e.min();
        if min_eig >= -threshold {
            OrderCertificate {
                verdict: Verdict::Geq,
                min_eig,
                threshold,
                witness: None,
            }
        } else {
            OrderCertificate {
                verdict: Verdict::NotGeq,
                min_eig,
                threshold,
                witness: Some(Witness {
                    eigenvalue: min_eig,
                    vector: e.vector(e.dim() - 1),
                }),
            }
        }
    }
}

/// `A >= 0`.
pub fn is_psd(a: &HermitianMatrix, tol: &Tolerances) -> Result<OrderCertificate> {
    Ok(OrderCertificate::from_eigen(&eigh(a, tol)?, tol))
}

/// `A >= B`, i.e. `A - B >= 0`.
pub fn loewner_geq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<OrderCertificate> {
    is_psd(&a.checked_sub(b)?, tol)
}

fn require(cert: OrderCertificate, hypothesis: Hypothesis) -> Result<()> {
    match cert.witness {
        None => Ok(()),
        Some(witness) => Err(Error::HypothesisViolated {
            hypothesis,
            witness,
        }),
    }
}

/// Checks `A >= B >= 0` and returns the eigendecompositions of `A` and `B`.
fn check_hypotheses(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<(EigenDecomposition, EigenDecomposition)> {
    require(loewner_geq(a, b, tol)?, Hypothesis::Dominates)?;
    let eb = eigh(b, tol)?;
    require(OrderCertificate::from_eigen(&eb, tol), Hypothesis::LowerPsd)?;
    Ok((eigh(a, tol)?, eb))
}

/// Given `A >= B >= 0`, compares `sqrt(A)` with `sqrt(B)`.
///
/// The verdict is expected to be `GEQ`; a `NOT_GEQ` result is returned as
/// is so that callers can see it.
pub fn sqrt_monotone_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<OrderCertificate> {
    let (ea, eb) = check_hypotheses(a, b, tol)?;
    sqrt_order(&ea, &eb, tol)
}

fn sqrt_order(
    ea: &EigenDecomposition,
    eb: &EigenDecomposition,
    tol: &Tolerances,
) -> Result<OrderCertificate> {
    let ra = sqrt_from_eigen(ea).root;
    let rb = sqrt_from_eigen(eb).root;
    loewner_geq(&ra, &rb, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub rank_a: usize,
    pub rank_b: usize,
    pub det_a: f64,
    pub det_b: f64,
    pub trace_a: f64,
    pub trace_b: f64,
    /// Truth value of "equal traces implies `A = B`" on this pair; vacuously
    /// true when the traces differ.
    pub trace_equality_implies_same: bool,
    /// `B^-1 >= A^-1`, present iff both matrices are nonsingular.
    pub inverse_reversed: Option<bool>,
    pub sqrt_order: OrderCertificate,
}

fn rank(e: &EigenDecomposition) -> usize {
    let cut = RANK_TOLERANCE * e.spectral_norm();
    e.values.iter().filter(|&&l| l > cut).count()
}

fn nonsingular(e: &EigenDecomposition, tol: &Tolerances) -> bool {
    e.min() > tol.psd * e.spectral_norm()
}

/// Rank, determinant, trace and inverse comparisons for `A >= B >= 0`.
pub fn monotonicity_report(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<MonotonicityReport> {
    let (ea, eb) = check_hypotheses(a, b, tol)?;

    let trace_a: f64 = ea.values.iter().sum();
    let trace_b: f64 = eb.values.iter().sum();
    let traces_equal = (trace_a - trace_b).abs() <= tol.eq * 1f64.max(trace_a.abs());
    let trace_equality_implies_same =
        !traces_equal || matrix_equal(a.as_matrix(), b.as_matrix(), 100.0 * tol.eq)?;

    let inverse_reversed = if nonsingular(&ea, tol) && nonsingular(&eb, tol) {
        let inv_a = ea.map(|l| 1.0 / l);
        let inv_b = eb.map(|l| 1.0 / l);
        Some(loewner_geq(&inv_b, &inv_a, tol)?.holds())
    } else {
        None
    };

    Ok(MonotonicityReport {
        rank_a: rank(&ea),
        rank_b: rank(&eb),
        det_a: ea.values.iter().product(),
        det_b: eb.values.iter().product(),
        trace_a,
        trace_b,
        trace_equality_implies_same,
        inverse_reversed,
        sqrt_order: sqrt_order(&ea, &eb, tol)?,
    })
}
