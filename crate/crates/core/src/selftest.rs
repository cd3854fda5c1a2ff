//! Seeded property corpora for every library guarantee, runnable from a
//! single base seed.
//!
//! Each corpus returns a [`CriterionOutcome`]; `worst` is the largest
//! observed `measured / bound` ratio, so a passing corpus has `worst <= 1`.

use std::fmt;

use num_complex::Complex64;

use crate::congruence::{congruence_diag, order_via_diagonals, reconstruct, Which};
use crate::eigen::eigh;
use crate::error::Result;
use crate::hermitian::{quadratic_form, HermitianMatrix};
use crate::matrix::{dot, matrix_equal, ComplexMatrix, ZERO};
use crate::oracles::{
    derive_seed, gen_commuting_pair, gen_dominated_pair, gen_hermitian, gen_psd, gen_unitary,
    psd_by_minors, SeededGenerator, SplitMix64,
};
use crate::order::{is_psd, loewner_geq, monotonicity_report, sqrt_monotone_check};
use crate::sqrtm::{denman_beavers_sqrt, psd_sqrt, sqrt_commutes, sqrt_commutes_by_parts};
use crate::tolerance::Tolerances;

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    pub worst: f64,
    /// First failing case, if any.
    pub first_failure: Option<String>,
    /// Free-form summary of sub-corpora.
    pub notes: String,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {} ({} cases, {} violations, worst ratio {:.3e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.violations,
            self.worst
        )?;
        if !self.notes.is_empty() {
            write!(f, " {}", self.notes)?;
        }
        if let Some(why) = &self.first_failure {
            write!(f, " first failure: {why}")?;
        }
        Ok(())
    }
}

struct Tally {
    outcome: CriterionOutcome,
}

impl Tally {
    fn new(id: u8, name: &'static str) -> Self {
        Tally {
            outcome: CriterionOutcome {
                id,
                name,
                cases: 0,
                violations: 0,
                worst: 0.0,
                first_failure: None,
                notes: String::new(),
            },
        }
    }

    fn case(&mut self) {
        self.outcome.cases += 1;
    }

    fn fail(&mut self, why: impl FnOnce() -> String) {
        self.outcome.violations += 1;
        if self.outcome.first_failure.is_none() {
            self.outcome.first_failure = Some(why());
        }
    }

    /// Records `measured <= bound`.
    fn bound(&mut self, label: &str, case: usize, measured: f64, bound: f64) {
        let ratio = if bound > 0.0 {
            measured / bound
        } else if measured == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio.is_nan() || ratio > self.outcome.worst {
            self.outcome.worst = if ratio.is_nan() { f64::INFINITY } else { ratio };
        }
        if !(measured <= bound) {
            self.fail(|| format!("case {case}: {label} {measured:e} > {bound:e}"));
        }
    }

    fn check(&mut self, label: &str, case: usize, ok: bool) {
        if !ok {
            self.fail(|| format!("case {case}: {label}"));
        }
    }

    fn result<T>(&mut self, case: usize, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(|| format!("case {case}: {e}"));
                None
            }
        }
    }

    fn finish(self) -> CriterionOutcome {
        self.outcome
    }
}

fn case_generator(seed: u64, criterion: u8, index: usize, n: usize) -> SeededGenerator {
    SeededGenerator::new(
        derive_seed(derive_seed(seed, criterion as u64), index as u64),
        n,
    )
}

fn scale(x: f64) -> f64 {
    1f64.max(x)
}

fn square(h: &HermitianMatrix) -> ComplexMatrix {
    h.as_matrix() * h.as_matrix()
}

/// PSD matrix with an exact common kernel of dimension `kernel` (in a random
/// basis) and the given rank on the complement.
fn gen_psd_with_kernel(g: &SeededGenerator, kernel: usize, rank: usize) -> HermitianMatrix {
    let n = g.n;
    let live = n - kernel;
    let rank = rank.min(live);
    let mut rng = SplitMix64::new(g.seed ^ 0xA5A5_5A5A_0F0F_F0F0);
    let mut factor = vec![vec![ZERO; n]; rank];
    for i in 0..live {
        for col in factor.iter_mut() {
            col[i] = rng.complex_normal();
        }
    }
    let u = gen_unitary(&SeededGenerator::new(g.seed.rotate_left(17), n));
    let rotated: Vec<Vec<Complex64>> = factor.iter().map(|c| u.mul_vec(c)).collect();
    let m = ComplexMatrix::from_fn(n, |i, j| rotated.iter().map(|c| c[i] * c[j].conj()).sum());
    HermitianMatrix::new(m, &Tolerances::default()).expect("Gram matrices are Hermitian")
}

/// Criterion 1: `|(sqrt A)^2 - A|_F <= 100 eq max(1, |A|_F)` on 500 PSD
/// matrices, `n` in `2..=32`; the root is PSD and the clipped mass stays
/// below `psd |A|_2`.
pub fn sqrt_correctness(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(1, "square-root correctness");
    for i in 0..500 {
        let n = 2 + i % 31;
        let g = case_generator(seed, 1, i, n);
        let rank = match i % 5 {
            3 => n / 2,
            4 => n - 1,
            _ => n,
        };
        let a = gen_psd(&g, Some(rank));
        t.case();
        let Some(r) = t.result(i, psd_sqrt(&a, tol)) else {
            continue;
        };
        let resid = (&square(&r.root) - a.as_matrix()).frobenius_norm();
        t.bound(
            "|R^2 - A|_F",
            i,
            resid,
            100.0 * tol.eq * scale(a.frobenius_norm()),
        );
        let Some(ea) = t.result(i, eigh(&a, tol)) else {
            continue;
        };
        t.bound(
            "clipped mass",
            i,
            r.clipped_mass,
            tol.psd * ea.spectral_norm(),
        );
        if let Some(cert) = t.result(i, is_psd(&r.root, tol)) {
            t.check("root is PSD", i, cert.holds());
        }
    }
    t.finish()
}

/// Criterion 2: Jacobi and Denman–Beavers square roots agree, 200
/// nonsingular and 50 singular (shifted) inputs.
pub fn sqrt_uniqueness(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(2, "square-root uniqueness (oracle agreement)");
    let mut shifted_nonsingular = 0;
    for i in 0..250 {
        let singular = i >= 200;
        let n = 2 + i % 23;
        let g = case_generator(seed, 2, i, n);
        let a = if singular {
            gen_psd(&g, Some(n - 1 - (i % 2).min(n - 2)))
        } else {
            gen_psd(&g, None).shifted(0.05)
        };
        t.case();
        let (Some(direct), Some(db)) = (
            t.result(i, psd_sqrt(&a, tol)),
            t.result(i, denman_beavers_sqrt(&a, tol)),
        ) else {
            continue;
        };
        if singular {
            t.check("singular input is shifted", i, db.shift > 0.0);
        } else if db.shift > 0.0 {
            shifted_nonsingular += 1;
        }
        let target = a.shifted(db.shift);
        let resid = (&square(&db.root) - target.as_matrix()).frobenius_norm();
        t.bound(
            "|Y^2 - (A + dI)|_F",
            i,
            resid,
            100.0 * tol.eq * scale(a.frobenius_norm()),
        );
        let rel = 2.0 * db.shift.sqrt() + 100.0 * tol.eq;
        let diff = (direct.root.as_matrix() - db.root.as_matrix()).frobenius_norm();
        let norm_scale = scale(direct.root.frobenius_norm()).max(db.root.frobenius_norm());
        t.bound("|R_jacobi - R_db|_F", i, diff, rel * norm_scale);
    }
    t.check(
        "nonsingular corpus is unshifted",
        0,
        shifted_nonsingular == 0,
    );
    t.finish()
}

/// Criterion 3: `|B sqrt(A) - sqrt(A) B|_F <= 100 eq max(1, |A|_F^1/2 |B|_F)`
/// on 500 commuting pairs, by the direct root and by the Cartesian-part
/// route through simultaneous diagonalization.
pub fn commutation(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(3, "commutation propagation");
    for i in 0..500 {
        let n = 2 + i % 31;
        let g = case_generator(seed, 3, i, n);
        let (a, b) = gen_commuting_pair(&g);
        t.case();
        let bound = 100.0 * tol.eq * scale(a.frobenius_norm().sqrt() * b.frobenius_norm());
        if let Some(norm) = t.result(i, sqrt_commutes(&a, &b, tol)) {
            t.bound("|[B, sqrt A]|_F", i, norm, bound);
        }
        if i % 5 == 0 {
            if let Some(parts) = t.result(i, sqrt_commutes_by_parts(&a, &b, tol)) {
                t.bound("|[Re B, sqrt A]|_F", i, parts.real_part, bound);
                t.bound("|[Im B, sqrt A]|_F", i, parts.imag_part, bound);
            }
        }
    }
    t.finish()
}

/// Checks the Cauchy–Schwarz chain along an eigenpair `(lambda, x)` of
/// `sqrt A - sqrt B`:
/// `<Ax,x> >= <Ax,x>^1/2 <Bx,x>^1/2 >= |<sqrt A sqrt B x, x>|`, with
/// `<sqrt A sqrt B x, x> = <Ax,x> - lambda <sqrt A x, x>` and hence
/// `lambda <sqrt A x, x> >= 0`.
fn cauchy_schwarz_chain(
    t: &mut Tally,
    case: usize,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ra: &HermitianMatrix,
    rb: &HermitianMatrix,
    lambda: f64,
    x: &[Complex64],
) {
    let slack = 1e-9 * scale(a.frobenius_norm());
    let (Ok(qa), Ok(qb), Ok(sa)) = (
        quadratic_form(a, x),
        quadratic_form(b, x),
        quadratic_form(ra, x),
    ) else {
        t.fail(|| format!("case {case}: quadratic form dimension"));
        return;
    };
    let cross = dot(x, &ra.as_matrix().mul_vec(&rb.as_matrix().mul_vec(x)));
    let geo = qa.max(0.0).sqrt() * qb.max(0.0).sqrt();
    t.check("<Ax,x> >= <Ax,x>^1/2 <Bx,x>^1/2", case, qa >= geo - slack);
    t.check(
        "Cauchy-Schwarz |<sqrtA sqrtB x,x>|",
        case,
        geo >= cross.norm() - slack,
    );
    t.check(
        "<sqrtA sqrtB x,x> = <Ax,x> - lambda <sqrtA x,x>",
        case,
        (cross - Complex64::new(qa - lambda * sa, 0.0)).norm() <= slack,
    );
    t.check("lambda <sqrtA x,x> >= 0", case, lambda * sa >= -slack);
}

/// Criterion 4: `sqrt A >= sqrt B` on 1000 dominated pairs with
/// `min eig(sqrt A - sqrt B) >= -1e-8 max(1, |sqrt A - sqrt B|_2)`, plus the
/// Cauchy–Schwarz chain at the most negative eigenpair of every case.
pub fn sqrt_monotonicity(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(4, "square-root monotonicity");
    for i in 0..1000 {
        let n = 2 + i % 15;
        let g = case_generator(seed, 4, i, n);
        let (a, b) = gen_dominated_pair(&g);
        t.case();
        let Some(cert) = t.result(i, sqrt_monotone_check(&a, &b, tol)) else {
            continue;
        };
        t.check("verdict GEQ", i, cert.holds());
        let (Some(ra), Some(rb)) = (
            t.result(i, psd_sqrt(&a, tol)),
            t.result(i, psd_sqrt(&b, tol)),
        ) else {
            continue;
        };
        let Some(ed) = t.result(i, ra.root.checked_sub(&rb.root).and_then(|d| eigh(&d, tol)))
        else {
            continue;
        };
        let floor = 1e-8 * scale(ed.spectral_norm());
        t.bound("-min eig(sqrtA - sqrtB)", i, (-ed.min()).max(0.0), floor);
        let last = ed.dim() - 1;
        cauchy_schwarz_chain(
            &mut t,
            i,
            &a,
            &b,
            &ra.root,
            &rb.root,
            ed.min(),
            &ed.vector(last),
        );
    }
    t.finish()
}

/// Criterion 5: rank, determinant, trace and inverse monotonicity on the
/// criterion-4 corpus, and inverse reversal on its nonsingular variant
/// `(A + I/10, B + I/10)`.
pub fn corollaries(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(5, "rank/det/trace/inverse corollaries");
    let mut equal_traces = 0;
    let mut inverse_checked = 0;
    for i in 0..1000 {
        let n = 2 + i % 15;
        let g = case_generator(seed, 4, i, n);
        let (a, b) = gen_dominated_pair(&g);
        t.case();
        let Some(r) = t.result(i, monotonicity_report(&a, &b, tol)) else {
            continue;
        };
        t.check("rank(A) >= rank(B)", i, r.rank_a >= r.rank_b);
        t.bound(
            "det(B) - det(A)",
            i,
            r.det_b - r.det_a,
            1e-9 * scale(r.det_a.abs()),
        );
        t.bound(
            "tr(B) - tr(A)",
            i,
            r.trace_b - r.trace_a,
            1e-12 * scale(r.trace_a.abs()),
        );
        t.check("sqrt order", i, r.sqrt_order.holds());
        if let Some(rev) = r.inverse_reversed {
            inverse_checked += 1;
            t.check("B^-1 >= A^-1", i, rev);
        }
        if (r.trace_a - r.trace_b).abs() <= 1e-12 * scale(r.trace_a.abs()) {
            equal_traces += 1;
            let same = matrix_equal(a.as_matrix(), b.as_matrix(), 1e-8).unwrap_or(false);
            t.check("equal traces imply A = B", i, same);
        }
        // A = B always has equal traces.
        let self_report = t.result(i, monotonicity_report(&b, &b, tol));
        if let Some(s) = self_report {
            t.check(
                "tr(B) = tr(B)",
                i,
                s.trace_a == s.trace_b && s.trace_equality_implies_same,
            );
        }

        let (a1, b1) = (a.shifted(0.1), b.shifted(0.1));
        t.case();
        if let Some(r1) = t.result(i, monotonicity_report(&a1, &b1, tol)) {
            t.check(
                "nonsingular: B^-1 >= A^-1",
                i,
                r1.inverse_reversed == Some(true),
            );
        }
    }
    t.outcome.notes = format!(
        "(equal-trace pairs {equal_traces}, inverse checks on base corpus {inverse_checked})"
    );
    t.finish()
}

fn congruence_pair(g: &SeededGenerator, kind: usize) -> (HermitianMatrix, HermitianMatrix) {
    let n = g.n;
    let second = SeededGenerator::new(g.seed.wrapping_add(0x9E37), n);
    match kind {
        0 => (gen_psd(g, None), gen_psd(&second, None)),
        1 => (gen_psd(g, Some(n - 1)), gen_psd(&second, Some(n / 2))),
        2 => gen_dominated_pair(g),
        3 => {
            let kernel = 1 + n / 4;
            (
                gen_psd_with_kernel(g, kernel, n),
                gen_psd_with_kernel(
                    &SeededGenerator::new(g.seed.wrapping_add(1), n),
                    kernel,
                    (n - kernel) / 2 + 1,
                ),
            )
        }
        _ => {
            let a = gen_psd(g, Some(n / 2 + 1));
            (a.clone(), a)
        }
    }
}

/// Criterion 6: congruence diagonalization on 200 PSD pairs, including
/// rank-deficient pairs and pairs with a common kernel.
pub fn congruence(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(6, "congruence diagonalization");
    for i in 0..200 {
        let n = 2 + i % 15;
        let g = case_generator(seed, 6, i, n);
        let (a, b) = congruence_pair(&g, i % 5);
        t.case();
        for (x, y, orientation) in [(&a, &b, "A,B"), (&b, &a, "B,A")] {
            let Some(r) = t.result(i, congruence_diag(x, y, tol)) else {
                continue;
            };
            t.check("cond estimate finite", i, r.cond_estimate.is_finite());
            let cond2 = r.cond_estimate * r.cond_estimate;
            for (m, which) in [(x, Which::A), (y, Which::B)] {
                let bound = 100.0 * tol.eq * scale(m.frobenius_norm() * cond2);
                if let Some(res) = t.result(i, r.residual(m, which)) {
                    t.bound("|P*MP - diag(d)|_F", i, res, bound);
                }
                let dscale = r.diagonal(which).iter().fold(1f64, |s, d| s.max(d.abs()));
                t.check(
                    "diagonal nonnegative",
                    i,
                    r.diagonal(which).iter().all(|&d| d >= -tol.psd * dscale),
                );
                if let Some(back) = t.result(i, reconstruct(&r, which)) {
                    let ok = matrix_equal(
                        back.as_matrix(),
                        m.as_matrix(),
                        100.0 * tol.eq * scale(cond2),
                    );
                    t.check("reconstruct round trip", i, ok.unwrap_or(false));
                }
            }
            for (k, (d1, d2)) in r.d1.iter().zip(&r.d2).enumerate() {
                let s = d1 + d2;
                let ok = (s - 1.0).abs() <= 100.0 * tol.eq || s.abs() <= 100.0 * tol.eq;
                t.check("d1 + d2 in {0, 1}", i, ok);
                let _ = k;
            }
            if let Some(cert) = t.result(i, loewner_geq(x, y, tol)) {
                let via = order_via_diagonals(&r, tol);
                if via != cert.holds() {
                    t.fail(|| {
                        format!(
                            "case {i} ({orientation}): diagonals say {via}, Loewner says {}",
                            cert.verdict
                        )
                    });
                }
            }
        }
    }
    t.finish()
}

/// Criterion 7: `is_psd` agrees with the principal-minor oracle on 300
/// matrices with `n <= 8`: PSD, rank-deficient, and shifted indefinite.
pub fn oracle_agreement(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(7, "eigenvalue test vs principal minors");
    let mut verdicts = [0usize; 2];
    for i in 0..300 {
        let n = 2 + i % 7;
        let g = case_generator(seed, 7, i, n);
        let a = match i % 3 {
            0 => gen_psd(&g, None),
            1 => gen_psd(&g, Some(i / 3 % n)),
            _ => {
                let base = gen_psd(&g, Some(n - (i / 3) % 2));
                let eps = 10f64.powi(-(1 + (i / 3 % 6) as i32)) * scale(base.frobenius_norm());
                base.shifted(-eps)
            }
        };
        t.case();
        let (Some(cert), Some(minors)) = (
            t.result(i, is_psd(&a, tol)),
            t.result(i, psd_by_minors(&a, tol)),
        ) else {
            continue;
        };
        verdicts[cert.holds() as usize] += 1;
        if cert.holds() != minors {
            t.fail(|| {
                format!(
                    "case {i}: eigen {} vs minors {minors} (min eig {:e})",
                    cert.verdict, cert.min_eig
                )
            });
        }
    }
    t.outcome.notes = format!("(PSD {}, not PSD {})", verdicts[1], verdicts[0]);
    t.finish()
}

/// Criterion 8: Jacobi reconstruction, unitarity, ordering, trace and
/// Frobenius invariants on 1000 Hermitian matrices, including `n` up to 64.
pub fn eigensolver(seed: u64, tol: &Tolerances) -> CriterionOutcome {
    let mut t = Tally::new(8, "eigensolver soundness");
    for i in 0..1000 {
        let n = if i % 25 == 0 {
            33 + (i / 25) % 32
        } else {
            2 + i % 31
        };
        let g = case_generator(seed, 8, i, n);
        let psd = i % 4 == 1;
        let a = if psd {
            gen_psd(&g, None)
        } else {
            gen_hermitian(&g)
        };
        t.case();
        let Some(e) = t.result(i, eigh(&a, tol)) else {
            continue;
        };
        let fro = a.frobenius_norm();
        let resid = (e.reconstruct().as_matrix() - a.as_matrix()).frobenius_norm();
        t.bound("|A - U L U*|_F", i, resid, 10.0 * tol.eq * scale(fro));
        let gram = &e.vectors.adjoint() * &e.vectors;
        let unit = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
        t.bound("|U*U - I|_F", i, unit, 10.0 * tol.eq * n as f64);
        let sum: f64 = e.values.iter().sum();
        t.bound(
            "|sum l - tr A|",
            i,
            (sum - a.trace()).abs(),
            tol.eq * scale(fro),
        );
        let sq: f64 = e.values.iter().map(|l| l * l).sum();
        t.bound(
            "|sum l^2 - |A|_F^2|",
            i,
            (sq - fro * fro).abs(),
            tol.eq * scale(fro * fro),
        );
        t.check(
            "descending order",
            i,
            e.values.windows(2).all(|w| w[0] >= w[1]),
        );
        if psd {
            t.bound(
                "-min eig of G G*",
                i,
                (-e.min()).max(0.0),
                tol.psd * e.spectral_norm(),
            );
        }
    }
    t.finish()
}

/// Runs criteria 1 through 8 from one base seed.
pub fn run_all(seed: u64, tol: &Tolerances) -> Vec<CriterionOutcome> {
    vec![
        sqrt_correctness(seed, tol),
        sqrt_uniqueness(seed, tol),
        commutation(seed, tol),
        sqrt_monotonicity(seed, tol),
        corollaries(seed, tol),
        congruence(seed, tol),
        oracle_agreement(seed, tol),
        eigensolver(seed, tol),
    ]
}
