//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and
//! simultaneous unitary diagonalization of commuting Hermitian pairs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::matrix::{commutator_norm, dot, ComplexMatrix, ZERO};
use crate::tolerance::Tolerances;

/// Relative gap below which adjacent eigenvalues are treated as one
/// eigenspace when diagonalizing a commuting pair.
pub const CLUSTER_GAP: f64 = 1e-8;

/// `A = U diag(values) U*` with `values` sorted descending.
///
/// Each column of `vectors` is phase-normalized so that its first entry of
/// largest modulus is real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub vectors: ComplexMatrix,
    pub values: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `max |lambda|`, i.e. the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    /// `U diag(f(lambda)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        HermitianMatrix::symmetrized(spectral_sum(&self.vectors, &weights))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }
}

/// `U diag(w) U*` for a square `U`.
pub(crate) fn spectral_sum(u: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let n = u.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut s = ZERO;
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    s += u[(i, k)] * u[(j, k)].conj() * w;
                }
            }
            *out.at_mut(i, j) = s;
            *out.at_mut(j, i) = s.conj();
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Cyclic-by-row Jacobi: each `(p, q)` rotation first removes the phase of
/// the off-diagonal entry and then applies a real plane rotation. Sweeps stop
/// once the off-diagonal Frobenius mass drops to `conv * |A|_F`.
pub fn eigh(a: &HermitianMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut w = a.as_matrix().clone();
    let mut u = ComplexMatrix::identity(n);
    let target = tol.conv * a.frobenius_norm();

    let mut off = w.off_diagonal_norm();
    let mut sweeps = 0;
    while off > target {
        if sweeps == tol.max_sweeps {
            return Err(Error::NonConvergence {
                iterations: sweeps,
                residual: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut u, p, q);
            }
        }
        sweeps += 1;
        off = w.off_diagonal_norm();
    }

    let raw: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    Ok(sorted_decomposition(&u, &raw))
}

fn rotate(w: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    // Negligible against both diagonal entries: drop it.
    if app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs() {
        *w.at_mut(p, q) = ZERO;
        *w.at_mut(q, p) = ZERO;
        return;
    }

    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = [[c, s], [-s conj(e), c conj(e)]] acting on columns p, q.
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = w.dim();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        *w.at_mut(k, p) = wkp * c + wkq * jqp;
        *w.at_mut(k, q) = wkp * s + wkq * jqq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        *w.at_mut(p, k) = wpk * c + wqk * jqp.conj();
        *w.at_mut(q, k) = wpk * s + wqk * jqq.conj();
    }
    *w.at_mut(p, q) = ZERO;
    *w.at_mut(q, p) = ZERO;
    w.at_mut(p, p).im = 0.0;
    w.at_mut(q, q).im = 0.0;

    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        *u.at_mut(k, p) = ukp * c + ukq * jqp;
        *u.at_mut(k, q) = ukp * s + ukq * jqq;
    }
}

/// Sorts eigenpairs descending (stable on ties) and normalizes column phases.
fn sorted_decomposition(u: &ComplexMatrix, raw: &[f64]) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));
    let columns: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&j| {
            let mut col = u.column(j);
            normalize_phase(&mut col);
            col
        })
        .collect();
    EigenDecomposition {
        vectors: ComplexMatrix::from_columns(&columns),
        values: order.iter().map(|&j| raw[j]).collect(),
    }
}

/// Rotates `v` so its first entry of largest modulus is real and nonnegative.
pub(crate) fn normalize_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best = i;
            best_mag = m;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let rot = (v[best] / best_mag).conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(v[best].re, 0.0);
}

/// One unitary diagonalizing two commuting Hermitian matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousDiagonalization {
    pub unitary: ComplexMatrix,
    /// Diagonal of `U* A U`, in the eigenvalue order of `A`.
    pub first: Vec<f64>,
    /// Diagonal of `U* H U`, aligned with `first`.
    pub second: Vec<f64>,
}

/// Simultaneously diagonalizes commuting Hermitian `a` and `h`.
///
/// The eigenvalues of `a` are grouped into clusters wherever consecutive
/// sorted values differ by at most `CLUSTER_GAP * |A|_2`; inside each
/// cluster `h` is compressed to the cluster basis and diagonalized there.
pub fn sim_diag_commuting(
    a: &HermitianMatrix,
    h: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<SimultaneousDiagonalization> {
    let norm = commutator_norm(a.as_matrix(), h.as_matrix())?;
    let bound = tol.eq * 1f64.max(a.frobenius_norm() * h.frobenius_norm());
    if norm > bound {
        return Err(Error::NotCommuting { norm, bound });
    }

    let n = a.dim();
    let ea = eigh(a, tol)?;
    let gap = CLUSTER_GAP * ea.spectral_norm();
    let basis = ea.vectors.columns();
    let hm = h.as_matrix();

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && ea.values[end - 1] - ea.values[end] <= gap {
            end += 1;
        }
        let cluster = &basis[start..end];
        if cluster.len() == 1 {
            columns.push(cluster[0].clone());
        } else {
            columns.extend(diagonalize_in_subspace(hm, cluster, tol)?);
        }
        start = end;
    }

    let unitary = ComplexMatrix::from_columns(&columns);
    let first = rayleigh_diagonal(a.as_matrix(), &columns);
    let second = rayleigh_diagonal(hm, &columns);
    Ok(SimultaneousDiagonalization {
        unitary,
        first,
        second,
    })
}

/// Diagonalizes `V* H V` for an orthonormal column block `V` and returns the
/// rotated block `V Q`.
fn diagonalize_in_subspace(
    h: &ComplexMatrix,
    block: &[Vec<Complex64>],
    tol: &Tolerances,
) -> Result<Vec<Vec<Complex64>>> {
    let m = block.len();
    let hv: Vec<Vec<Complex64>> = block.iter().map(|v| h.mul_vec(v)).collect();
    let compressed = ComplexMatrix::from_fn(m, |i, j| dot(&block[i], &hv[j]));
    let ec = eigh(&HermitianMatrix::symmetrized(compressed), tol)?;
    let n = h.dim();
    Ok((0..m)
        .map(|j| {
            let mut col = vec![ZERO; n];
            for (i, v) in block.iter().enumerate() {
                let q = ec.vectors[(i, j)];
                for (c, z) in col.iter_mut().zip(v) {
                    *c += z * q;
                }
            }
            normalize_phase(&mut col);
            col
        })
        .collect())
}

fn rayleigh_diagonal(m: &ComplexMatrix, columns: &[Vec<Complex64>]) -> Vec<f64> {
    columns.iter().map(|v| dot(v, &m.mul_vec(v)).re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_equal;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_input_is_returned_unchanged() {
        let a = HermitianMatrix::from_diag(&[3.0, 1.0]);
        let e = eigh(&a, &tol()).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn ordering_flips_ascending_diagonal() {
        let a = HermitianMatrix::from_diag(&[1.0, 5.0, 3.0]);
        let e = eigh(&a, &tol()).unwrap();
        assert_eq!(e.values, vec![5.0, 3.0, 1.0]);
        assert_eq!(e.vector(0)[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn swap_matrix() {
        // lambda^2 - 1 = 0
        let a = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eigh(&a, &tol()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vector(0);
        let v1 = e.vector(1);
        assert!((v0[0] - r).norm() < 1e-15 && (v0[1] - r).norm() < 1e-15);
        // (1, -1)/sqrt 2 up to phase: the normalized form puts +r first.
        assert!((v1[0] - r).norm() < 1e-15 && (v1[1] + r).norm() < 1e-15);
    }

    #[test]
    fn two_by_two_char_poly() {
        // lambda^2 - 4 lambda + 3 = 0
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let e = eigh(&a, &tol()).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let c = Complex64::new;
        let a = HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                &[c(2.0, 0.0), c(1.0, 1.0), c(0.0, -0.5)],
                &[c(1.0, -1.0), c(-1.0, 0.0), c(0.3, 0.2)],
                &[c(0.0, 0.5), c(0.3, -0.2), c(4.0, 0.0)],
            ])
            .unwrap(),
            &tol(),
        )
        .unwrap();
        let e = eigh(&a, &tol()).unwrap();
        assert!(matrix_equal(e.reconstruct().as_matrix(), a.as_matrix(), 1e-13).unwrap());
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(matrix_equal(&gram, &ComplexMatrix::identity(3), 1e-13).unwrap());
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        assert!((e.values.iter().sum::<f64>() - 5.0).abs() < 1e-13);
    }

    #[test]
    fn one_by_one() {
        let a = HermitianMatrix::from_diag(&[-2.5]);
        let e = eigh(&a, &tol()).unwrap();
        assert_eq!(e.values, vec![-2.5]);
    }

    #[test]
    fn sweep_cap_reports_nonconvergence() {
        let a = HermitianMatrix::from_real_rows(&[
            &[1.0, 2.0, 3.0],
            &[2.0, 4.0, 5.0],
            &[3.0, 5.0, 6.0],
        ])
        .unwrap();
        let t = Tolerances {
            max_sweeps: 1,
            conv: 1e-300,
            ..tol()
        };
        assert!(matches!(
            eigh(&a, &t),
            Err(Error::NonConvergence { iterations: 1, .. })
        ));
    }

    #[test]
    fn commuting_pair_inside_repeated_eigenspace() {
        let a = HermitianMatrix::from_diag(&[1.0, 1.0, 2.0]);
        let h = HermitianMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 0.0, 5.0],
        ])
        .unwrap();
        let sd = sim_diag_commuting(&a, &h, &tol()).unwrap();
        // Columns come in the descending order of A: e3 first, then the
        // cluster {1, 1} ordered by the eigenvalues of H inside it.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [
            (2.0, 5.0, [0.0, 0.0, 1.0]),
            (1.0, 1.0, [r, r, 0.0]),
            (1.0, -1.0, [r, -r, 0.0]),
        ];
        for (j, (a_j, h_j, v)) in expected.iter().enumerate() {
            assert!((sd.first[j] - a_j).abs() < 1e-14);
            assert!((sd.second[j] - h_j).abs() < 1e-14);
            let col = sd.unitary.column(j);
            for (z, x) in col.iter().zip(v) {
                assert!((z - Complex64::new(*x, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn identity_commutes_with_everything() {
        let h = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, -3.0]]).unwrap();
        let sd = sim_diag_commuting(&HermitianMatrix::identity(2), &h, &tol()).unwrap();
        let eh = eigh(&h, &tol()).unwrap();
        assert!(matrix_equal(&sd.unitary, &eh.vectors, 1e-14).unwrap());
        for (x, y) in sd.second.iter().zip(&eh.values) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn self_pair() {
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let sd = sim_diag_commuting(&a, &a, &tol()).unwrap();
        let ea = eigh(&a, &tol()).unwrap();
        assert!(matrix_equal(&sd.unitary, &ea.vectors, 1e-14).unwrap());
        assert_eq!(sd.first, sd.second);
    }

    #[test]
    fn rejects_non_commuting() {
        let a = HermitianMatrix::from_diag(&[1.0, 2.0]);
        let h = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(matches!(
            sim_diag_commuting(&a, &h, &tol()),
            Err(Error::NotCommuting { .. })
        ));
    }
}
