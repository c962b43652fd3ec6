use proptest::prelude::*;
use racg::group::{CoxeterPresentation, Gen};
use racg::nerve::{analyze, enumerate_simplices, Nerve};
use racg_oracle::{brute_chromatic_number, brute_cliques, brute_has_square};

fn graph(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
        let mut adj = vec![0u64; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits[k] {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
                k += 1;
            }
        }
        adj
    })
}

fn sized_graph() -> impl Strategy<Value = Vec<u64>> {
    (1usize..=7).prop_flat_map(graph)
}

#[test]
fn polygon_squares() {
    for k in [5, 6, 7, 8] {
        let p = CoxeterPresentation::polygon(k).unwrap();
        assert!(Nerve::from_presentation(&p).find_square().is_none(), "{k}-gon");
        assert!(analyze(&p).hyperbolic);
    }
    let p = CoxeterPresentation::polygon(4).unwrap();
    let nerve = Nerve::from_presentation(&p);
    let sq = nerve.find_square().expect("4-cycle is a square");
    assert!(nerve.is_square(&sq));
    let mut t = [sq.t1, sq.t2];
    let mut s = [sq.s1, sq.s2];
    t.sort();
    s.sort();
    let pairs = [t, s];
    assert!(pairs.contains(&[Gen(0), Gen(2)]) && pairs.contains(&[Gen(1), Gen(3)]));
    let report = analyze(&p);
    assert!(!report.hyperbolic);
    assert!(report.square_witness.is_some());
}

#[test]
fn chromatic_examples() {
    let single = CoxeterPresentation::new(vec!["s".into()], &[], None).unwrap();
    assert_eq!(Nerve::from_presentation(&single).chromatic_coloring().chromatic_number, 1);
    let hex = CoxeterPresentation::polygon(6).unwrap();
    assert_eq!(analyze(&hex).chromatic_number, 2);
    let pent = CoxeterPresentation::polygon(5).unwrap();
    let c = Nerve::from_presentation(&pent).chromatic_coloring();
    assert_eq!(c.chromatic_number, 3);
    assert!(c.exact);
    assert!(Nerve::from_presentation(&pent).validate_coloring(&c.colors));
}

#[test]
fn validate_coloring_examples() {
    let hex = Nerve::from_presentation(&CoxeterPresentation::polygon(6).unwrap());
    assert!(hex.validate_coloring(&[0, 1, 0, 1, 0, 1]));
    let edge = Nerve::from_edges(2, &[(0, 1)]);
    assert!(!edge.validate_coloring(&[0, 0]));
}

#[test]
fn simplex_examples() {
    let hex = CoxeterPresentation::polygon(6).unwrap();
    let a = hex.color(Gen(0));
    assert_eq!(enumerate_simplices(&hex, a), vec![1 << 1, 1 << 3, 1 << 5]);

    let single = CoxeterPresentation::new(vec!["s".into()], &[], None).unwrap();
    assert!(enumerate_simplices(&single, single.color(Gen(0))).is_empty());

    // K_{1,2}: the centre commutes with both leaves.
    let names = vec!["c".into(), "x".into(), "y".into()];
    let k12 = CoxeterPresentation::new(names, &[(0, 1), (0, 2)], Some(vec![1, 2, 2])).unwrap();
    assert_eq!(enumerate_simplices(&k12, k12.color(Gen(0))), vec![0b010, 0b100]);
}

#[test]
fn simplices_commute_and_avoid_color() {
    let p = CoxeterPresentation::polygon(5).unwrap();
    for a in p.colors() {
        let simplices = enumerate_simplices(&p, a);
        assert!(!simplices.is_empty());
        for s in simplices {
            let gens: Vec<Gen> = p.generators().filter(|g| s & g.bit() != 0).collect();
            assert!(gens.len() < p.num_colors());
            assert!(p.is_reduced(&gens));
            for &x in &gens {
                assert_ne!(p.color(x), a);
                for &y in &gens {
                    assert!(x == y || p.commutes(x, y));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn square_detection_matches_brute_force(adj in sized_graph()) {
        let nerve = Nerve::from_adjacency(adj.clone());
        let found = nerve.find_square();
        prop_assert_eq!(found.is_some(), brute_has_square(&adj));
        if let Some(sq) = found {
            prop_assert!(nerve.is_square(&sq));
        }
    }

    #[test]
    fn chromatic_number_matches_brute_force(adj in sized_graph()) {
        let nerve = Nerve::from_adjacency(adj.clone());
        let c = nerve.chromatic_coloring();
        prop_assert!(nerve.validate_coloring(&c.colors));
        prop_assert_eq!(c.chromatic_number, brute_chromatic_number(&adj));
        prop_assert!(c.exact);
    }

    #[test]
    fn cliques_match_brute_force(adj in sized_graph(), excluded in any::<u64>()) {
        let n = adj.len();
        let excluded = excluded & ((1u64 << n) - 1);
        let nerve = Nerve::from_adjacency(adj.clone());
        prop_assert_eq!(nerve.cliques_avoiding(excluded), brute_cliques(&adj, excluded));
    }
}
