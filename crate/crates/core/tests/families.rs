use circuitlab::families::*;
use circuitlab::Rational;

#[test]
fn builder_row_counts() {
    let p = build_matching_polytope(4).unwrap();
    assert_eq!((p.ambient_dim(), p.inequalities().len()), (6, 14));
    let p = build_matching_polytope(5).unwrap();
    assert_eq!((p.ambient_dim(), p.inequalities().len()), (10, 26));
    assert!(build_matching_polytope(2).unwrap().description_complete());

    let q = build_perfect_matching_polytope(4).unwrap();
    assert_eq!(
        (
            q.ambient_dim(),
            q.equalities().len(),
            q.inequalities().len()
        ),
        (6, 4, 4 + 6)
    );
    let q8 = build_perfect_matching_polytope(8).unwrap();
    assert_eq!(q8.inequalities().len(), 120 + 28);
    assert!(build_perfect_matching_polytope(7).is_err());

    let t5 = build_tsp_polytope(5, false).unwrap();
    assert!(t5.description_complete());
    let t6 = build_tsp_polytope(6, true).unwrap();
    assert!(!t6.description_complete());
    let combs = t6
        .row_labels()
        .iter()
        .filter(|l| l.starts_with("comb"))
        .count();
    assert_eq!(combs, 120);
    assert_eq!(comb_row_count(6), 120);
    assert!(build_tsp_polytope(5, true).is_err());
    assert!(build_tsp_polytope(2, false).is_err());
}

#[test]
fn builders_are_deterministic() {
    assert_eq!(
        build_tsp_polytope(6, true).unwrap().to_json(),
        build_tsp_polytope(6, true).unwrap().to_json()
    );
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_matchings(4).unwrap().len(), 10);
    assert_eq!(enumerate_matchings(7).unwrap().len(), 232);
    assert_eq!(enumerate_perfect_matchings(8).unwrap().len(), 105);
    assert_eq!(enumerate_tours(7).unwrap().len(), 360);
    assert_eq!(enumerate_tours(5).unwrap().len(), 12);
    assert_eq!(enumerate_tours(3).unwrap().len(), 1);
}

#[test]
fn triangle_tsp_polytope_is_a_point() {
    let p = build_tsp_polytope(3, false).unwrap();
    let ix = EdgeIndex::new(3);
    let t = ix.chi(&tour_edges(&[0, 1, 2]));
    assert!(p.is_vertex(&t).unwrap());
    let other = t.scale(&Rational::new(1, 2));
    assert!(!p.contains(&other).unwrap());
}

#[test]
fn enumerated_vectors_are_vertices() {
    for n in 2..=5 {
        let p = build_matching_polytope(n).unwrap();
        let ix = EdgeIndex::new(n);
        for m in enumerate_matchings(n).unwrap() {
            assert!(p.is_vertex(&ix.chi(&m)).unwrap());
        }
    }
    let p = build_perfect_matching_polytope(6).unwrap();
    let ix = EdgeIndex::new(6);
    for m in enumerate_perfect_matchings(6).unwrap() {
        assert!(p.is_vertex(&ix.chi(&m)).unwrap());
    }
    let p = build_tsp_polytope(5, false).unwrap();
    let ix = EdgeIndex::new(5);
    for t in enumerate_tours(5).unwrap() {
        assert!(p.is_vertex(&ix.chi(&tour_edges(&t))).unwrap());
    }
}

#[test]
fn no_other_half_integral_vertices() {
    // every {0, 1/2, 1} point of P_match(4) that is a vertex is a matching
    let p = build_matching_polytope(4).unwrap();
    let ix = EdgeIndex::new(4);
    let ms: Vec<_> = enumerate_matchings(4)
        .unwrap()
        .iter()
        .map(|m| ix.chi(m))
        .collect();
    let mut vertices = 0;
    for code in 0..3usize.pow(6) {
        let x: circuitlab::RationalVector = (0..6)
            .map(|k| Rational::new(((code / 3usize.pow(k)) % 3) as i64, 2))
            .collect();
        if p.contains(&x).unwrap() && p.is_vertex(&x).unwrap() {
            assert!(ms.contains(&x), "{x}");
            vertices += 1;
        }
    }
    assert_eq!(vertices, 10);
}

#[test]
fn component_examples() {
    let c = symmetric_difference_components(&[(0, 1)], &[(0, 2)], 4);
    assert_eq!(c.len(), 2);
    assert_eq!(c[0].kind, ComponentKind::Path);
    assert_eq!(c[0].nodes, vec![0, 1, 2]);
    assert_eq!(c[1].kind, ComponentKind::Trivial);

    let c = symmetric_difference_components(&[(0, 1), (2, 3)], &[(0, 2), (1, 3)], 4);
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].kind, ComponentKind::Cycle);

    let c = symmetric_difference_components(&[], &[(0, 1)], 4);
    assert_eq!(
        c.iter().filter(|c| c.kind == ComponentKind::Path).count(),
        1
    );
    assert_eq!(
        c.iter()
            .filter(|c| c.kind == ComponentKind::Trivial)
            .count(),
        2
    );
}

#[test]
fn recipe_cases() {
    let p = build_matching_polytope(7).unwrap();
    let w = matching_two_step_recipe(&p, &[(0, 1), (2, 3)], &[(1, 2), (4, 5)], 7).unwrap();
    assert!(w.len() <= 2);
    let w = matching_two_step_recipe(&p, &[], &[(0, 1), (2, 3)], 7).unwrap();
    assert!(w.len() <= 2);
    assert_eq!(w.end(), &EdgeIndex::new(7).chi(&[(0, 1), (2, 3)]));
    let w = matching_two_step_recipe(&p, &[(0, 1)], &[(0, 1)], 7).unwrap();
    assert_eq!(w.len(), 0);
    assert!(
        matching_two_step_recipe(&build_matching_polytope(6).unwrap(), &[], &[(0, 1)], 6).is_err()
    );
}

#[test]
fn canonical_tours() {
    assert_eq!(canonical_tour(&[3, 4, 0, 1, 2]), vec![0, 1, 2, 3, 4]);
    assert_eq!(canonical_tour(&[0, 4, 3, 2, 1]), vec![0, 1, 2, 3, 4]);
}
