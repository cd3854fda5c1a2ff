//! Browser bindings for the 2x2 real symmetric case, where a PSD matrix `M`
//! can be drawn as the ellipse `{x : x^T M^-1 x <= 1}` (semi-axes
//! `sqrt(lambda)` along the eigenvectors). `A >= B` in the Loewner order
//! exactly when the ellipse of `B` lies inside the ellipse of `A`.
//!
//! Each exported function takes the entries `m11, m12, m22` of one or two
//! matrices and returns a JSON string; failures come back as
//! `{"error": "..."}` so the page never sees an exception.

use loewner::{
    congruence_diag, is_psd, loewner_geq, psd_sqrt, ComplexMatrix, HermitianMatrix,
    OrderCertificate, Tolerances,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Points per ellipse outline.
const OUTLINE: usize = 96;

type Point = [f64; 2];

#[derive(Debug, Serialize)]
pub struct Shape {
    /// `[m11, m12, m22]`.
    pub entries: [f64; 3],
    pub eigenvalues: [f64; 2],
    /// Closed outline of `M^(1/2)` applied to the unit circle.
    pub outline: Vec<Point>,
}

#[derive(Debug, Serialize)]
pub struct SqrtView {
    pub a: Shape,
    pub root: Shape,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct Verdicts {
    pub a_geq_b: bool,
    pub b_geq_a: bool,
    pub min_eig_a_minus_b: f64,
    pub min_eig_b_minus_a: f64,
    /// Unit vector where `x^T (A - B) x` is most negative, when `A >= B` fails.
    pub witness: Option<Point>,
}

#[derive(Debug, Serialize)]
pub struct OrderView {
    pub a: Shape,
    pub b: Shape,
    pub order: Verdicts,
    pub sqrt_a: Shape,
    pub sqrt_b: Shape,
    pub sqrt_order: Verdicts,
}

#[derive(Debug, Serialize)]
pub struct CongruenceView {
    pub a: Shape,
    pub b: Shape,
    /// Row-major `P`.
    pub p: [f64; 4],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    pub cond_estimate: Option<f64>,
    /// Ellipses of `P^T A P` and `P^T B P`, both axis-aligned.
    pub a_diag: Shape,
    pub b_diag: Shape,
}

fn matrix(entries: [f64; 3]) -> Result<HermitianMatrix, String> {
    let [m11, m12, m22] = entries;
    let m =
        ComplexMatrix::from_real_rows(&[&[m11, m12], &[m12, m22]]).map_err(|e| e.to_string())?;
    HermitianMatrix::new(m, &Tolerances::default()).map_err(|e| e.to_string())
}

fn entries(m: &HermitianMatrix) -> [f64; 3] {
    let m = m.as_matrix();
    [m[(0, 0)].re, m[(0, 1)].re, m[(1, 1)].re]
}

fn shape(m: &HermitianMatrix) -> Result<Shape, String> {
    let tol = Tolerances::default();
    let half = psd_sqrt(m, &tol).map_err(|e| e.to_string())?.root;
    let h = half.as_matrix();
    let outline = (0..=OUTLINE)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / OUTLINE as f64;
            let (s, c) = t.sin_cos();
            [
                h[(0, 0)].re * c + h[(0, 1)].re * s,
                h[(1, 0)].re * c + h[(1, 1)].re * s,
            ]
        })
        .collect();
    let e = loewner::eigh(m, &tol).map_err(|e| e.to_string())?;
    Ok(Shape {
        entries: entries(m),
        eigenvalues: [e.values[0], e.values[1]],
        outline,
    })
}

fn verdicts(ab: &OrderCertificate, ba: &OrderCertificate) -> Verdicts {
    Verdicts {
        a_geq_b: ab.holds(),
        b_geq_a: ba.holds(),
        min_eig_a_minus_b: ab.min_eig,
        min_eig_b_minus_a: ba.min_eig,
        witness: ab
            .witness
            .as_ref()
            .map(|w| [w.vector[0].re, w.vector[1].re]),
    }
}

fn require_psd(m: &HermitianMatrix, name: &str) -> Result<(), String> {
    match is_psd(m, &Tolerances::default())
        .map_err(|e| e.to_string())?
        .witness
    {
        None => Ok(()),
        Some(w) => Err(format!(
            "{name} is not positive semidefinite (eigenvalue {:.4})",
            w.eigenvalue
        )),
    }
}

pub fn sqrt_view(a: [f64; 3]) -> Result<SqrtView, String> {
    let a = matrix(a)?;
    require_psd(&a, "A")?;
    let root = psd_sqrt(&a, &Tolerances::default())
        .map_err(|e| e.to_string())?
        .root;
    let r = root.as_matrix();
    let residual = (&(r * r) - a.as_matrix()).frobenius_norm();
    Ok(SqrtView {
        a: shape(&a)?,
        root: shape(&root)?,
        residual,
    })
}

pub fn order_view(a: [f64; 3], b: [f64; 3]) -> Result<OrderView, String> {
    let tol = Tolerances::default();
    let (a, b) = (matrix(a)?, matrix(b)?);
    require_psd(&a, "A")?;
    require_psd(&b, "B")?;
    let order = |x: &HermitianMatrix, y: &HermitianMatrix| {
        loewner_geq(x, y, &tol).map_err(|e| e.to_string())
    };
    let ra = psd_sqrt(&a, &tol).map_err(|e| e.to_string())?.root;
    let rb = psd_sqrt(&b, &tol).map_err(|e| e.to_string())?.root;
    Ok(OrderView {
        order: verdicts(&order(&a, &b)?, &order(&b, &a)?),
        sqrt_order: verdicts(&order(&ra, &rb)?, &order(&rb, &ra)?),
        a: shape(&a)?,
        b: shape(&b)?,
        sqrt_a: shape(&ra)?,
        sqrt_b: shape(&rb)?,
    })
}

pub fn congruence_view(a: [f64; 3], b: [f64; 3]) -> Result<CongruenceView, String> {
    let tol = Tolerances::default();
    let (a, b) = (matrix(a)?, matrix(b)?);
    require_psd(&a, "A")?;
    require_psd(&b, "B")?;
    let r = congruence_diag(&a, &b, &tol).map_err(|e| e.to_string())?;
    let p = &r.p;
    let a_diag = a.congruence(p).map_err(|e| e.to_string())?;
    let b_diag = b.congruence(p).map_err(|e| e.to_string())?;
    Ok(CongruenceView {
        p: [p[(0, 0)].re, p[(0, 1)].re, p[(1, 0)].re, p[(1, 1)].re],
        d1: [r.d1[0], r.d1[1]],
        d2: [r.d2[0], r.d2[1]],
        cond_estimate: r.cond_estimate.is_finite().then_some(r.cond_estimate),
        a: shape(&a)?,
        b: shape(&b)?,
        a_diag: shape(&a_diag)?,
        b_diag: shape(&b_diag)?,
    })
}

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    let value = match result {
        Ok(view) => serde_json::to_value(view),
        Err(message) => Ok(serde_json::json!({ "error": message })),
    };
    value.map_or_else(|e| format!("{{\"error\": \"{e}\"}}"), |v| v.to_string())
}

#[wasm_bindgen]
pub fn sqrt_2x2(a11: f64, a12: f64, a22: f64) -> String {
    to_json(sqrt_view([a11, a12, a22]))
}

#[wasm_bindgen]
pub fn order_2x2(a11: f64, a12: f64, a22: f64, b11: f64, b12: f64, b22: f64) -> String {
    to_json(order_view([a11, a12, a22], [b11, b12, b22]))
}

#[wasm_bindgen]
pub fn congruence_2x2(a11: f64, a12: f64, a22: f64, b11: f64, b12: f64, b22: f64) -> String {
    to_json(congruence_view([a11, a12, a22], [b11, b12, b22]))
}
