use circuitlab::families::{build_matching_polytope, EdgeIndex};
use circuitlab::fstab::{build_fstab_polytope, Graph};
use circuitlab::{Error, HPolytope, Rational, RationalVector};
use proptest::prelude::*;

fn half(v: &[i64]) -> RationalVector {
    v.iter().map(|&k| Rational::new(k, 2)).collect()
}

fn labels(p: &HPolytope, rows: &[usize]) -> Vec<String> {
    rows.iter()
        .map(|&i| p.inequalities()[i].label.clone())
        .collect()
}

#[test]
fn membership_in_matching_polytope() {
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    assert!(p.contains(&ix.chi(&[])).unwrap());
    assert!(p.contains(&ix.chi(&[(0, 1), (2, 3)])).unwrap());
    assert!(!p.contains(&ix.chi(&[(0, 1), (0, 2)])).unwrap());
    assert_eq!(
        p.contains(&RationalVector::zeros(5)),
        Err(Error::DimensionMismatch {
            expected: 6,
            found: 5
        })
    );
}

#[test]
fn tight_rows_examples() {
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    let t = p.tight_rows(&ix.chi(&[])).unwrap();
    assert_eq!(t.inequality_rows, (0..6).collect::<Vec<_>>());

    let t = p.tight_rows(&ix.chi(&[(0, 1)])).unwrap();
    assert_eq!(
        labels(&p, &t.inequality_rows),
        [
            "x[0,2] >= 0",
            "x[0,3] >= 0",
            "x[1,2] >= 0",
            "x[1,3] >= 0",
            "x[2,3] >= 0",
            "x(delta(0)) <= 1",
            "x(delta(1)) <= 1",
            "x(E[{0,1,2}]) <= 1",
            "x(E[{0,1,3}]) <= 1",
        ]
    );

    let k3 = build_fstab_polytope(&Graph::complete(3)).unwrap();
    let t = k3.tight_rows(&half(&[1, 1, 1])).unwrap();
    assert_eq!(t.inequality_rows, vec![0, 1, 2]);
    assert_eq!(k3.tight_rows(&half(&[2, 2, 0])), Err(Error::NotInPolytope));
}

#[test]
fn vertex_examples() {
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    assert!(p.is_vertex(&ix.chi(&[])).unwrap());
    assert!(!p
        .is_vertex(&ix.chi(&[(0, 1)]).scale(&Rational::new(1, 2)))
        .unwrap());
    let k3 = build_fstab_polytope(&Graph::complete(3)).unwrap();
    assert!(k3.is_vertex(&half(&[1, 1, 1])).unwrap());
}

#[test]
fn ratio_test_examples() {
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    let zero = ix.chi(&[]);
    let e01 = ix.chi(&[(0, 1)]);
    assert_eq!(p.max_step(&zero, &e01).unwrap(), Some(Rational::one()));
    let mixed = RationalVector::from_ints(&[1, -1, 0, 0, 0, 0]);
    assert_eq!(p.max_step(&zero, &mixed).unwrap(), None);

    let k3 = build_fstab_polytope(&Graph::complete(3)).unwrap();
    let ones = RationalVector::from_ints(&[1, 1, 1]);
    assert_eq!(
        k3.max_step(&RationalVector::zeros(3), &ones).unwrap(),
        Some(Rational::new(1, 2))
    );
    assert_eq!(
        k3.max_step(&RationalVector::zeros(3), &RationalVector::zeros(3)),
        Err(Error::ZeroVector)
    );
}

#[test]
fn json_round_trip_preserves_rows() {
    let p = build_matching_polytope(5).unwrap();
    let json = p.to_json();
    let q = HPolytope::from_json(&json).unwrap();
    assert_eq!(q.to_json(), json);
    assert_eq!(q.row_labels(), p.row_labels());
}

fn matching4_point_and_direction() -> impl Strategy<Value = (RationalVector, RationalVector)> {
    let ix = EdgeIndex::new(4);
    let verts: Vec<RationalVector> = circuitlab::families::enumerate_matchings(4)
        .unwrap()
        .iter()
        .map(|m| ix.chi(m))
        .collect();
    (
        0..verts.len(),
        0..verts.len(),
        prop::collection::vec(-2i64..=2, 6),
    )
        .prop_map(move |(i, j, g)| {
            let x = verts[i].add(&verts[j]).scale(&Rational::new(1, 2));
            (x, RationalVector::from_ints(&g))
        })
}

proptest! {
    #[test]
    fn max_step_is_homogeneous((x, g) in matching4_point_and_direction(), lambda in 1i64..7) {
        prop_assume!(!g.is_zero());
        let p = build_matching_polytope(4).unwrap();
        let a = p.max_step(&x, &g).unwrap();
        let b = p.max_step(&x, &g.scale(&Rational::from_int(lambda))).unwrap();
        prop_assert_eq!(b, a.map(|a| &a / &Rational::from_int(lambda)));
    }

    #[test]
    fn max_step_lands_on_the_boundary((x, g) in matching4_point_and_direction()) {
        prop_assume!(!g.is_zero());
        let p = build_matching_polytope(4).unwrap();
        if let Some(a) = p.max_step(&x, &g).unwrap() {
            let y = x.add_scaled(&a, &g);
            prop_assert!(p.contains(&y).unwrap());
            let binding = p.inequalities().iter().enumerate().any(|(i, row)| {
                row.coeffs.dot(&g).is_positive()
                    && p.eval_inequality(i, &x) < row.rhs
                    && p.eval_inequality(i, &y) == row.rhs
            });
            prop_assert!(binding);
            let beyond = x.add_scaled(&(&a + &Rational::new(1, 1000)), &g);
            prop_assert!(!p.contains(&beyond).unwrap());
        }
    }
}
