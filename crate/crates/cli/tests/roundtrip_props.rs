use loewner::{Complex64, ComplexMatrix};
use loewner_cli::format::{print_matrix, Encoding};
use loewner_cli::parse_matrix;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<u64>()
            .prop_map(f64::from_bits)
            .prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
        Just(5e-324),
    ]
}

fn matrix() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..5).prop_flat_map(|n| {
        prop::collection::vec((finite(), finite()), n * n).prop_map(move |pairs| {
            let data = pairs
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            ComplexMatrix::new(n, data).unwrap()
        })
    })
}

fn bits(m: &ComplexMatrix) -> Vec<(u64, u64)> {
    m.as_slice()
        .iter()
        .map(|z| (z.re.to_bits(), z.im.to_bits()))
        .collect()
}

proptest! {
    #[test]
    fn json_round_trip(m in matrix()) {
        let text = print_matrix(&m, Encoding::Json);
        let back = parse_matrix(text.as_bytes()).unwrap();
        prop_assert_eq!(bits(&back), bits(&m));
        prop_assert_eq!(print_matrix(&back, Encoding::Json), text);
    }

    #[test]
    fn grid_round_trip(m in matrix()) {
        let text = print_matrix(&m, Encoding::Grid);
        let back = parse_matrix(text.as_bytes()).unwrap();
        prop_assert_eq!(bits(&back), bits(&m));
        prop_assert_eq!(print_matrix(&back, Encoding::Grid), text);
    }

    #[test]
    fn serde_embedding_round_trips(m in matrix()) {
        let embedded = serde_json::to_string(&loewner_cli::format::MatrixJson::from(&m)).unwrap();
        let back = parse_matrix(embedded.as_bytes()).unwrap();
        prop_assert_eq!(bits(&back), bits(&m));
    }
}
