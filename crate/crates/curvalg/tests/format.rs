use curvalg::format::{parse_operator, write_operator, FormatError};
use curvalg_core::combinatorics::{all_matrices, IntMatrix};
use curvalg_core::convolution::ConvOperator;
use curvalg_core::funcspace::{BlockShape, BlockSymFunction, FinitePoints, Ground, Poly, Table};
use curvalg_core::Rational;
use proptest::prelude::*;

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// An operator on `n = 2`, degree `d`, from raw random draws.
fn build(d: u32, finite: bool, draws: &[(usize, Vec<u32>, i64, i64)]) -> ConvOperator {
    let basis = all_matrices(2, d);
    let pts = FinitePoints::new(vec![rat(0, 1), rat(1, 1), rat(-1, 2)]).unwrap();
    let ground = if finite { Ground::FiniteSet(pts.clone()) } else { Ground::ExactLine };
    let mut op = ConvOperator::zero(ground);
    for (k, exps, num, den) in draws {
        let a: IntMatrix = basis[k % basis.len()].clone();
        let shape = BlockShape::of_matrix(&a);
        let key: Vec<u32> = (0..shape.d()).map(|i| exps.get(i).copied().unwrap_or(0)).collect();
        let p = Poly::monomial(&shape, key, rat(*num, *den)).unwrap();
        let f = if finite {
            BlockSymFunction::from_table(shape.clone(), pts.clone(), Table::from_poly(&p, &shape, &pts))
        } else {
            BlockSymFunction::from_poly(shape, p)
        };
        op.add_term(a, f).unwrap();
    }
    op
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(
        d in 0u32..=3,
        finite in any::<bool>(),
        draws in prop::collection::vec((0usize..64, prop::collection::vec(0u32..3, 0..4), -9i64..=9, 1i64..=5), 0..5),
    ) {
        let op = build(d, finite, &draws);
        let text = write_operator(&op).unwrap();
        let back = parse_operator(&text).unwrap();
        prop_assert_eq!(&back, &op);
        prop_assert_eq!(write_operator(&back).unwrap(), text);
    }
}

#[test]
fn fixtures_are_canonical() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/op_2_2.json")).unwrap();
    assert_eq!(write_operator(&parse_operator(&text).unwrap()).unwrap(), text);
}

#[test]
fn table_configurations_are_one_based() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/finite_op.json")).unwrap();
    let op = parse_operator(&text).unwrap();
    let a = IntMatrix::from_rows(&[[1u32, 1], [0, 0]]).unwrap();
    let t = op.term(&a).unwrap().table().unwrap();
    let shape = BlockShape::of_matrix(&a);
    assert_eq!(t.get(&shape, &[0, 1]), rat(3, 1));
    assert_eq!(t.get(&shape, &[2, 2]), rat(-1, 2));
    assert_eq!(t.get(&shape, &[1, 1]), rat(0, 1));
}

#[test]
fn invalid_content_is_rejected() {
    let cases = [
        r#"{"ground": {"kind": "exact_line"}, "terms": [{"matrix": [[1, 0], [0, 1]], "function": {"kind": "poly", "terms": [{"exponents": [1], "coeff": "1"}]}}]}"#,
        r#"{"ground": {"kind": "exact_line"}, "terms": [{"matrix": [[1, 0]], "function": {"kind": "poly", "terms": []}}]}"#,
        r#"{"ground": {"kind": "exact_line"}, "terms": [{"matrix": [[1]], "function": {"kind": "poly", "terms": [{"exponents": [0], "coeff": "x"}]}}]}"#,
        r#"{"ground": {"kind": "finite_set", "points": ["1", "1"]}, "terms": []}"#,
        r#"{"ground": {"kind": "finite_set", "points": ["1"]}, "terms": [{"matrix": [[1]], "function": {"kind": "table", "values": [{"config": [0], "value": "1"}]}}]}"#,
        r#"{"ground": {"kind": "finite_set", "points": ["1", "2"]}, "terms": [{"matrix": [[2]], "function": {"kind": "table", "values": [{"config": [2, 1], "value": "1"}]}}]}"#,
        r#"{"ground": {"kind": "exact_line"}, "terms": [{"matrix": [[1]], "function": {"kind": "table", "values": []}}]}"#,
    ];
    for c in cases {
        assert!(matches!(parse_operator(c), Err(FormatError::Content(_))), "{c}");
    }
    let syntax = [r#"{"ground": {"kind": "torus"}, "terms": []}"#, r#"{"ground": {"kind": "exact_line"}}"#, "[1, 2"];
    for c in syntax {
        assert!(matches!(parse_operator(c), Err(FormatError::Syntax(_))), "{c}");
    }
}
