use std::fmt::Write as _;

use loewner::selftest::{self, CriterionOutcome};
use loewner::{
    commutator_norm, congruence_diag, is_psd, loewner_geq, monotonicity_report, psd_sqrt,
    sqrt_commutes, ComplexMatrix, Error as LibError, HermitianMatrix, OrderCertificate, Which,
    Witness,
};
use serde_json::{json, Value};

use crate::format::{real, to_grid, token, MatrixJson};
use crate::{CliError, Context, ExitCode};

fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix serializes")
}

fn witness_value(w: &Witness) -> Value {
    json!({
        "eigenvalue": w.eigenvalue,
        "vector": w.vector.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    })
}

fn witness_line(w: &Witness) -> String {
    let v: Vec<String> = w.vector.iter().map(|&z| token(z)).collect();
    format!(
        "witness: eigenvalue {} vector [{}]",
        real(w.eigenvalue),
        v.join(" ")
    )
}

fn certificate_value(c: &OrderCertificate) -> Value {
    json!({
        "verdict": c.verdict.to_string(),
        "min_eig": c.min_eig,
        "threshold": c.threshold,
        "witness": c.witness.as_ref().map(witness_value),
    })
}

fn certificate_text(label: &str, c: &OrderCertificate, out: &mut String) {
    let _ = writeln!(
        out,
        "{label}: {} (min eigenvalue {}, threshold {})",
        c.verdict,
        real(c.min_eig),
        real(c.threshold)
    );
    if let Some(w) = &c.witness {
        let _ = writeln!(out, "  {}", witness_line(w));
    }
}

fn emit(out: &mut String, value: Value) {
    out.push_str(&serde_json::to_string_pretty(&value).expect("report serializes"));
    out.push('\n');
}

fn floats(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| real(x)).collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn sqrtm(
    cx: &Context,
    a: &HermitianMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let result = psd_sqrt(a, &cx.tol)?;
    let root = result.root.as_matrix();
    let residual = (&(root * root) - a.as_matrix()).frobenius_norm();
    if cx.json {
        emit(
            out,
            json!({
                "root": matrix_value(root),
                "residual": residual,
                "clipped_mass": result.clipped_mass,
            }),
        );
    } else {
        out.push_str("sqrt(A) =\n");
        out.push_str(&to_grid(root));
        let _ = writeln!(out, "residual |sqrt(A)^2 - A|_F = {}", real(residual));
        let _ = writeln!(out, "clipped mass = {}", real(result.clipped_mass));
    }
    Ok(ExitCode::Computed)
}

pub(crate) fn check_psd(
    cx: &Context,
    a: &HermitianMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let cert = is_psd(a, &cx.tol)?;
    if cx.json {
        emit(
            out,
            json!({ "psd": cert.holds(), "certificate": certificate_value(&cert) }),
        );
    } else {
        certificate_text("A >= 0", &cert, out);
    }
    Ok(ExitCode::Computed)
}

/// Relation between `A` and `B` given both order verdicts.
pub fn relation(a_geq_b: bool, b_geq_a: bool) -> &'static str {
    match (a_geq_b, b_geq_a) {
        (true, true) => "equal",
        (true, false) => "A >= B",
        (false, true) => "B >= A",
        (false, false) => "incomparable",
    }
}

pub(crate) fn order(
    cx: &Context,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let ab = loewner_geq(a, b, &cx.tol)?;
    let ba = loewner_geq(b, a, &cx.tol)?;
    let rel = relation(ab.holds(), ba.holds());
    if cx.json {
        emit(
            out,
            json!({
                "a_geq_b": certificate_value(&ab),
                "b_geq_a": certificate_value(&ba),
                "relation": rel,
            }),
        );
    } else {
        certificate_text("A >= B", &ab, out);
        certificate_text("B >= A", &ba, out);
        let _ = writeln!(out, "relation: {rel}");
    }
    Ok(ExitCode::Computed)
}

pub(crate) fn commute(
    cx: &Context,
    a: &HermitianMatrix,
    b: &ComplexMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let norm_ab = commutator_norm(a.as_matrix(), b)?;
    let bound = cx.tol.eq * 1f64.max(a.frobenius_norm() * b.frobenius_norm());
    let (norm_root, violation) = match sqrt_commutes(a, b, &cx.tol) {
        Ok(norm) => (norm, None),
        Err(e @ LibError::NotCommuting { .. }) => {
            let root = psd_sqrt(a, &cx.tol)?.root;
            (commutator_norm(b, root.as_matrix())?, Some(e))
        }
        Err(e) => return Err(e.into()),
    };
    if cx.json {
        emit(
            out,
            json!({
                "commutator_a_b": norm_ab,
                "commutator_sqrt_a_b": norm_root,
                "bound": bound,
                "commuting": violation.is_none(),
            }),
        );
    } else {
        let _ = writeln!(
            out,
            "|AB - BA|_F = {} (bound {})",
            real(norm_ab),
            real(bound)
        );
        let _ = writeln!(out, "|B sqrt(A) - sqrt(A) B|_F = {}", real(norm_root));
    }
    match violation {
        None => Ok(ExitCode::Computed),
        Some(e) => Err(e.into()),
    }
}

pub(crate) fn congruence(
    cx: &Context,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let r = congruence_diag(a, b, &cx.tol)?;
    let res_a = r.residual(a, Which::A)?;
    let res_b = r.residual(b, Which::B)?;
    if cx.json {
        emit(
            out,
            json!({
                "p": matrix_value(&r.p),
                "d1": r.d1,
                "d2": r.d2,
                // JSON has no infinity; a singular P shows up as null.
                "cond_estimate": r.cond_estimate.is_finite().then_some(r.cond_estimate),
                "residual_a": res_a,
                "residual_b": res_b,
            }),
        );
    } else {
        out.push_str("P =\n");
        out.push_str(&to_grid(&r.p));
        let _ = writeln!(out, "d1 = {}", floats(&r.d1));
        let _ = writeln!(out, "d2 = {}", floats(&r.d2));
        let _ = writeln!(out, "cond estimate = {}", real(r.cond_estimate));
        let _ = writeln!(out, "residual |P* A P - diag(d1)|_F = {}", real(res_a));
        let _ = writeln!(out, "residual |P* B P - diag(d2)|_F = {}", real(res_b));
    }
    Ok(ExitCode::Computed)
}

fn geq_word(holds: bool) -> &'static str {
    if holds {
        "GEQ"
    } else {
        "NOT_GEQ"
    }
}

pub(crate) fn monotonicity(
    cx: &Context,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let r = monotonicity_report(a, b, &cx.tol)?;
    if cx.json {
        emit(
            out,
            json!({
                "rank_a": r.rank_a,
                "rank_b": r.rank_b,
                "det_a": r.det_a,
                "det_b": r.det_b,
                "trace_a": r.trace_a,
                "trace_b": r.trace_b,
                "trace_equality_implies_same": r.trace_equality_implies_same,
                "inverse_reversed": r.inverse_reversed,
                "sqrt_order": certificate_value(&r.sqrt_order),
            }),
        );
    } else {
        let _ = writeln!(out, "rank: {} >= {}", r.rank_a, r.rank_b);
        let _ = writeln!(out, "det: {} >= {}", real(r.det_a), real(r.det_b));
        let _ = writeln!(out, "trace: {} >= {}", real(r.trace_a), real(r.trace_b));
        let _ = writeln!(
            out,
            "equal trace implies A = B: {}",
            r.trace_equality_implies_same
        );
        match r.inverse_reversed {
            Some(holds) => {
                let _ = writeln!(out, "B^-1 >= A^-1: {}", geq_word(holds));
            }
            None => out.push_str("B^-1 >= A^-1: not applicable (singular)\n"),
        }
        certificate_text("sqrt(A) >= sqrt(B)", &r.sqrt_order, out);
    }
    Ok(ExitCode::Computed)
}

fn criterion(id: u8, seed: u64, cx: &Context) -> CriterionOutcome {
    let tol = &cx.tol;
    match id {
        1 => selftest::sqrt_correctness(seed, tol),
        2 => selftest::sqrt_uniqueness(seed, tol),
        3 => selftest::commutation(seed, tol),
        4 => selftest::sqrt_monotonicity(seed, tol),
        5 => selftest::corollaries(seed, tol),
        6 => selftest::congruence(seed, tol),
        7 => selftest::oracle_agreement(seed, tol),
        8 => selftest::eigensolver(seed, tol),
        _ => unreachable!("criterion ids are validated by the argument parser"),
    }
}

pub(crate) fn selftest(
    cx: &Context,
    seed: u64,
    only: &[u8],
    out: &mut String,
) -> Result<ExitCode, CliError> {
    let ids: Vec<u8> = if only.is_empty() {
        (1..=8).collect()
    } else {
        only.to_vec()
    };
    let outcomes: Vec<CriterionOutcome> = ids.iter().map(|&id| criterion(id, seed, cx)).collect();
    if cx.json {
        let rows: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "name": o.name,
                    "passed": o.passed(),
                    "cases": o.cases,
                    "violations": o.violations,
                    "worst": o.worst,
                    "first_failure": o.first_failure,
                    "notes": o.notes,
                })
            })
            .collect();
        emit(out, json!({ "seed": seed, "criteria": rows }));
    } else {
        let _ = writeln!(out, "seed {seed:#x}");
        for o in &outcomes {
            let _ = writeln!(out, "{o}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed > 0 {
        return Err(CliError::SelftestFailed {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(ExitCode::Computed)
}

fn error_witness(e: &CliError) -> Option<&Witness> {
    match e {
        CliError::Library(LibError::NotPsd { witness })
        | CliError::Library(LibError::HypothesisViolated { witness, .. }) => Some(witness),
        _ => None,
    }
}

pub(crate) fn error_text(e: &CliError) -> String {
    let mut text = format!("error: {e}\n");
    if let Some(w) = error_witness(e) {
        let _ = writeln!(text, "  {}", witness_line(w));
    }
    text
}

pub(crate) fn error_json(e: &CliError, code: ExitCode) -> String {
    let mut out = String::new();
    emit(
        &mut out,
        json!({
            "error": {
                "code": code.code(),
                "message": e.to_string(),
                "witness": error_witness(e).map(witness_value),
            }
        }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use loewner::Verdict;

    #[test]
    fn relations() {
        assert_eq!(relation(true, true), "equal");
        assert_eq!(relation(false, false), "incomparable");
        assert_eq!(relation(true, false), "A >= B");
        assert_eq!(relation(false, true), "B >= A");
        assert_eq!(geq_word(true), Verdict::Geq.to_string());
        assert_eq!(geq_word(false), Verdict::NotGeq.to_string());
    }
}
