use circuitlab::linalg::{
    is_scaling_of, nullspace_basis, rank, rank_by_elimination, unique_nullspace_solution, Rational,
    RationalMatrix, RationalVector,
};
use proptest::prelude::*;

fn m(rows: &[&[i64]], ncols: usize) -> RationalMatrix {
    RationalMatrix::from_ints(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), ncols).unwrap()
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&RationalMatrix::identity(2)), 2);
    assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
    assert_eq!(rank(&m(&[&[1, 2], &[2, 4]], 2)), 1);
}

#[test]
fn nullspace_examples() {
    assert!(nullspace_basis(&RationalMatrix::identity(3)).is_empty());
    let basis = nullspace_basis(&m(&[&[1, 1]], 2));
    assert_eq!(basis.len(), 1);
    assert!(is_scaling_of(&basis[0], &RationalVector::from_ints(&[1, -1])).unwrap());

    // degree rows of K4 over edges 01 02 03 12 13 23; a graph with an odd
    // cycle has an incidence matrix of full row rank
    let k4 = m(
        &[
            &[1, 1, 1, 0, 0, 0],
            &[1, 0, 0, 1, 1, 0],
            &[0, 1, 0, 1, 0, 1],
            &[0, 0, 1, 0, 1, 1],
        ],
        6,
    );
    assert_eq!(rank_by_elimination(&k4), 4);
    let basis = nullspace_basis(&k4);
    assert_eq!(basis.len(), 2);
    for v in &basis {
        assert!(k4.mul_vec(v).is_zero());
    }
}

#[test]
fn unique_solution_examples() {
    let v = unique_nullspace_solution(&m(&[&[1, 1]], 2)).unwrap();
    assert!(is_scaling_of(&v, &RationalVector::from_ints(&[1, -1])).unwrap());
    assert!(unique_nullspace_solution(&RationalMatrix::identity(3)).is_none());
    assert!(unique_nullspace_solution(&RationalMatrix::zeros(1, 2)).is_none());
}

#[test]
fn scaling_examples() {
    let v = RationalVector::from_ints;
    assert!(is_scaling_of(&v(&[2, -2]), &v(&[1, -1])).unwrap());
    assert!(!is_scaling_of(&v(&[1, 0]), &v(&[0, 1])).unwrap());
    assert!(is_scaling_of(&v(&[0, 0]), &v(&[1, 2])).unwrap());
    assert!(is_scaling_of(&v(&[1]), &v(&[1, 2])).is_err());
}

#[test]
fn rationals_are_exact_and_reduced() {
    let a: Rational = "6/-4".parse().unwrap();
    assert_eq!(a.to_string(), "-3/2");
    let third = Rational::new(1, 3);
    let sum = &(&third + &third) + &third;
    assert_eq!(sum, Rational::one());
    let big: Rational = "123456789012345678901234567890/3".parse().unwrap();
    assert_eq!(big.to_string(), "41152263004115226300411522630");
    assert_eq!(
        serde_json::to_string(&Rational::new(-5, 10)).unwrap(),
        "\"-1/2\""
    );
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(move |rows| RationalMatrix::from_ints(&rows, c).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_ncols(mat in small_matrix()) {
        let basis = nullspace_basis(&mat);
        prop_assert_eq!(rank(&mat) + basis.len(), mat.ncols());
        for v in &basis {
            prop_assert!(mat.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn modular_rank_matches_elimination(mat in small_matrix(), scale in 1i64..1_000_000_007) {
        let scaled = RationalMatrix::new(
            mat.rows().iter().map(|r| r.scale(&Rational::from_int(scale))).collect(),
            mat.ncols(),
        ).unwrap();
        prop_assert_eq!(rank(&scaled), rank_by_elimination(&mat));
    }

    #[test]
    fn unique_solution_agrees_with_basis(mat in small_matrix()) {
        let basis = nullspace_basis(&mat);
        match unique_nullspace_solution(&mat) {
            Some(v) => {
                prop_assert_eq!(basis.len(), 1);
                prop_assert!(is_scaling_of(&v, &basis[0]).unwrap());
            }
            None => prop_assert_ne!(basis.len(), 1),
        }
    }
}
