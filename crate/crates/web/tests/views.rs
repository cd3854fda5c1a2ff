use loewner_web::{congruence_2x2, congruence_view, order_2x2, order_view, sqrt_2x2, sqrt_view};
use serde_json::Value;

#[test]
fn sqrt_of_diagonal() {
    let v = sqrt_view([4.0, 0.0, 9.0]).unwrap();
    assert_eq!(v.root.entries, [2.0, 0.0, 3.0]);
    assert!(v.residual <= 1e-12);
    // outline of diag(4, 9) starts at (sqrt 4, 0) and closes on itself
    assert_eq!(v.a.outline[0], [2.0, 0.0]);
    assert_eq!(
        v.a.outline.first(),
        v.a.outline.last().map(|p| [p[0], 0.0]).as_ref()
    );
}

#[test]
fn outline_points_lie_on_the_ellipse() {
    let v = sqrt_view([2.0, 1.0, 2.0]).unwrap();
    // x^T A^-1 x = 1 with A^-1 = [[2, -1], [-1, 2]] / 3
    for [x, y] in &v.a.outline {
        let q = (2.0 * x * x - 2.0 * x * y + 2.0 * y * y) / 3.0;
        assert!((q - 1.0).abs() < 1e-12, "{q}");
    }
}

#[test]
fn order_of_nested_and_crossing_ellipses() {
    let v = order_view([3.0, 0.0, 2.0], [1.0, 0.0, 1.0]).unwrap();
    assert!(v.order.a_geq_b && !v.order.b_geq_a);
    assert!(v.sqrt_order.a_geq_b);
    assert!(v.order.witness.is_none());

    let v = order_view([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
    assert!(!v.order.a_geq_b && !v.order.b_geq_a);
    assert_eq!(v.order.witness, Some([0.0, 1.0]));
}

#[test]
fn congruence_makes_both_diagonal() {
    let v = congruence_view([2.0, 1.0, 2.0], [1.0, 0.0, 3.0]).unwrap();
    for shape in [&v.a_diag, &v.b_diag] {
        assert!(shape.entries[1].abs() < 1e-12, "{:?}", shape.entries);
    }
    for k in 0..2 {
        assert!((v.d1[k] + v.d2[k] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn exported_functions_return_json() {
    let ok: Value = serde_json::from_str(&sqrt_2x2(1.0, 0.0, 1.0)).unwrap();
    assert!(ok["root"]["outline"].is_array());
    let err: Value = serde_json::from_str(&sqrt_2x2(1.0, 0.0, -1.0)).unwrap();
    assert!(err["error"]
        .as_str()
        .unwrap()
        .contains("not positive semidefinite"));
    let err: Value = serde_json::from_str(&order_2x2(1.0, 0.0, 1.0, f64::NAN, 0.0, 1.0)).unwrap();
    assert!(err["error"].is_string());
    let ok: Value = serde_json::from_str(&congruence_2x2(1.0, 0.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
    assert_eq!(ok["d1"], serde_json::json!([1.0, 0.0]));
}
