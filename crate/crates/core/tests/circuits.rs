use circuitlab::circuit::{enumerate_circuits, pairwise_circuit_report, DEFAULT_BUDGET};
use circuitlab::families::*;
use circuitlab::fstab::{build_fstab_polytope, Graph};
use circuitlab::{canonicalize, is_circuit, CircuitVerdict, Error, Rational, RationalVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn v(x: &[i64]) -> RationalVector {
    RationalVector::from_ints(x)
}

#[test]
fn canonical_forms() {
    let half_pair: RationalVector = [Rational::new(1, 2), Rational::new(-1, 2), Rational::zero()]
        .into_iter()
        .collect();
    assert_eq!(canonicalize(&half_pair).unwrap().direction, v(&[1, -1, 0]));
    assert_eq!(canonicalize(&v(&[-2, 4])).unwrap().direction, v(&[1, -2]));
    assert_eq!(
        canonicalize(&v(&[3, 0, 6])).unwrap().direction,
        v(&[1, 0, 2])
    );
    assert_eq!(canonicalize(&v(&[0, 0])).unwrap_err(), Error::ZeroVector);
}

#[test]
fn matching_and_perfect_matching_examples() {
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    assert!(!is_circuit(&p, &ix.chi(&[(0, 1), (2, 3)]))
        .unwrap()
        .is_circuit());
    assert!(is_circuit(&p, &ix.chi(&[(0, 2)]).sub(&ix.chi(&[(0, 1)])))
        .unwrap()
        .is_circuit());

    let p8 = build_perfect_matching_polytope(8).unwrap();
    let ix8 = EdgeIndex::new(8);
    let m1 = ix8.chi(&[(0, 1), (2, 3), (4, 5), (6, 7)]);
    let m2 = ix8.chi(&[(0, 3), (1, 2), (4, 7), (5, 6)]);
    assert_eq!(
        is_circuit(&p8, &m1.sub(&m2)).unwrap(),
        CircuitVerdict::NotCircuit
    );
}

#[test]
fn perfect_matchings_of_k10_sample() {
    let p = build_perfect_matching_polytope(10).unwrap();
    let ix = EdgeIndex::new(10);
    let pms = enumerate_perfect_matchings(10).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let a = &pms[rng.gen_range(0..pms.len())];
        let b = &pms[rng.gen_range(0..pms.len())];
        if a != b {
            assert!(
                is_circuit(&p, &ix.chi(a).sub(&ix.chi(b)))
                    .unwrap()
                    .is_circuit(),
                "{a:?} {b:?}"
            );
        }
    }
}

#[test]
fn edge_disjoint_tours_of_k5() {
    let p = build_tsp_polytope(5, false).unwrap();
    let ix = EdgeIndex::new(5);
    let t1 = ix.chi(&tour_edges(&[0, 1, 2, 3, 4]));
    let t2 = ix.chi(&tour_edges(&[0, 2, 4, 1, 3]));
    assert_eq!(
        is_circuit(&p, &t1.sub(&t2)).unwrap(),
        CircuitVerdict::NotCircuit
    );
}

#[test]
fn partial_descriptions_never_report_false() {
    let p = build_tsp_polytope(6, true).unwrap();
    let ix = EdgeIndex::new(6);
    // outside the kernel of the degree rows: conclusive
    assert_eq!(
        is_circuit(&p, &ix.chi(&[(0, 1), (2, 3)])).unwrap(),
        CircuitVerdict::NotCircuit
    );
    let tours: Vec<_> = enumerate_tours(6)
        .unwrap()
        .iter()
        .map(|t| ix.chi(&tour_edges(t)))
        .collect();
    let mut verdicts = Vec::new();
    for i in 0..20 {
        let g = tours[i]
            .add(&tours[i + 20])
            .sub(&tours[i + 40].scale(&Rational::from_int(2)));
        verdicts.push(is_circuit(&p, &g).unwrap());
    }
    assert!(verdicts.iter().all(|v| *v != CircuitVerdict::NotCircuit));
    let v = verdicts
        .iter()
        .find(|v| !v.is_circuit())
        .expect("an uncertified direction");
    assert_eq!(v.as_str(), "not-certified");
    assert_eq!(
        enumerate_circuits(&p, DEFAULT_BUDGET).unwrap_err(),
        Error::IncompleteDescription
    );
}

#[test]
fn single_edge_stable_set_circuits() {
    let p = build_fstab_polytope(&Graph::path(2)).unwrap();
    let cs = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
    let dirs: Vec<RationalVector> = cs.iter().map(|c| c.direction.clone()).collect();
    assert_eq!(dirs.len(), 3);
    for d in [v(&[1, 0]), v(&[0, 1]), v(&[1, -1])] {
        assert!(dirs.contains(&d));
    }
}

#[test]
fn matching3_vertex_differences_are_circuits() {
    let p = build_matching_polytope(3).unwrap();
    let ix = EdgeIndex::new(3);
    let cs = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
    let verts: Vec<_> = enumerate_matchings(3)
        .unwrap()
        .iter()
        .map(|m| ix.chi(m))
        .collect();
    for a in &verts {
        for b in &verts {
            if a != b {
                assert!(cs.contains_direction(&a.sub(b)));
                assert!(is_circuit(&p, &a.sub(b)).unwrap().is_circuit());
            }
        }
    }
    for k in 0..3 {
        assert!(cs.contains_direction(&RationalVector::unit(3, k)));
    }
}

#[test]
fn enumeration_matches_the_rank_test_on_matching4() {
    let p = build_matching_polytope(4).unwrap();
    let cs = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
    let mut found = 0;
    for code in 1..3i64.pow(6) {
        let g: RationalVector = (0..6)
            .map(|k| Rational::from_int((code / 3i64.pow(k)) % 3 - 1))
            .collect();
        if g.is_zero() {
            continue;
        }
        let test = is_circuit(&p, &g).unwrap().is_circuit();
        assert_eq!(test, cs.contains_direction(&g), "{g}");
        found += usize::from(test);
    }
    assert!(found > 0);
    for c in cs.iter() {
        assert!(is_circuit(&p, &c.direction).unwrap().is_circuit());
        let cert = is_circuit(&p, &c.direction).unwrap();
        assert_eq!(
            cert,
            CircuitVerdict::Circuit {
                certificate: c.certificate.clone()
            }
        );
    }
}

#[test]
fn single_component_differences_are_circuits() {
    for n in 2..=6 {
        let p = build_matching_polytope(n).unwrap();
        let ix = EdgeIndex::new(n);
        let ms = enumerate_matchings(n).unwrap();
        for a in &ms {
            for b in &ms {
                let nontrivial = symmetric_difference_components(a, b, n)
                    .iter()
                    .filter(|c| c.kind != ComponentKind::Trivial)
                    .count();
                if nontrivial == 1 {
                    assert!(
                        is_circuit(&p, &ix.chi(a).sub(&ix.chi(b)))
                            .unwrap()
                            .is_circuit(),
                        "{a:?} {b:?}"
                    );
                }
            }
        }
    }
    let p = build_perfect_matching_polytope(6).unwrap();
    let ix = EdgeIndex::new(6);
    for (i, j, verdict) in pairwise_circuit_report(
        &p,
        &enumerate_perfect_matchings(6)
            .unwrap()
            .iter()
            .map(|m| ix.chi(m))
            .collect::<Vec<_>>(),
    )
    .unwrap()
    {
        assert!(verdict.is_circuit(), "{i} {j}");
    }
}

#[test]
fn three_components_in_k7_give_circuits() {
    let p = build_matching_polytope(7).unwrap();
    let ix = EdgeIndex::new(7);
    let ms = enumerate_matchings(7).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 300 {
        let a = &ms[rng.gen_range(0..ms.len())];
        let b = &ms[rng.gen_range(0..ms.len())];
        let a_not_in_b = a.iter().any(|e| !b.contains(e));
        let b_not_in_a = b.iter().any(|e| !a.contains(e));
        if a_not_in_b && b_not_in_a && symmetric_difference_components(a, b, 7).len() >= 3 {
            assert!(
                is_circuit(&p, &ix.chi(a).sub(&ix.chi(b)))
                    .unwrap()
                    .is_circuit(),
                "{a:?} {b:?}"
            );
            tested += 1;
        }
    }
}

#[test]
fn tsp6_tours_pairwise() {
    let p = build_tsp_polytope(6, true).unwrap();
    let ix = EdgeIndex::new(6);
    let tours: Vec<_> = enumerate_tours(6)
        .unwrap()
        .iter()
        .map(|t| ix.chi(&tour_edges(t)))
        .collect();
    let report = pairwise_circuit_report(&p, &tours).unwrap();
    assert_eq!(report.len(), 60 * 59 / 2);
    assert!(report.iter().all(|(_, _, v)| v.is_circuit()));
}

#[test]
fn enumeration_budget_is_enforced() {
    let p = build_matching_polytope(5).unwrap();
    assert_eq!(
        enumerate_circuits(&p, 100).unwrap_err(),
        Error::BudgetExceeded { budget: 100 }
    );
}

#[test]
fn circuit_set_json_lists_directions_and_labels() {
    let p = build_fstab_polytope(&Graph::path(2)).unwrap();
    let cs = enumerate_circuits(&p, DEFAULT_BUDGET).unwrap();
    let json: serde_json::Value = serde_json::from_str(&cs.to_json(&p)).unwrap();
    assert_eq!(json["count"], 3);
    assert_eq!(json["circuits"].as_array().unwrap().len(), 3);
}

fn matching4_direction() -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-2i64..=2, 6).prop_map(|g| RationalVector::from_ints(&g))
}

proptest! {
    #[test]
    fn verdict_is_sign_and_scale_invariant(g in matching4_direction(), num in 1i64..9, den in 1i64..9) {
        prop_assume!(!g.is_zero());
        let p = build_matching_polytope(4).unwrap();
        let base = is_circuit(&p, &g).unwrap().is_circuit();
        let s = Rational::new(num, den);
        prop_assert_eq!(is_circuit(&p, &g.neg()).unwrap().is_circuit(), base);
        prop_assert_eq!(is_circuit(&p, &g.scale(&s)).unwrap().is_circuit(), base);
        prop_assert_eq!(is_circuit(&p, &g.scale(&-s)).unwrap().is_circuit(), base);
    }
}
