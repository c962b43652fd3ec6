use proptest::prelude::*;
use racg::group::{CoxeterPresentation, Gen, GroupElement};
use racg_oracle::{brute_medians, ShortlexOracle};

fn hexagon() -> CoxeterPresentation {
    CoxeterPresentation::polygon(6).unwrap()
}

fn pentagon() -> CoxeterPresentation {
    CoxeterPresentation::polygon(5).unwrap()
}

fn word(letters: &[u8]) -> Vec<Gen> {
    letters.iter().map(|&g| Gen(g)).collect()
}

fn check_all_words(p: &CoxeterPresentation, max_len: usize) {
    let oracle = ShortlexOracle::new(p, max_len);
    let mut checked = 0u64;
    oracle.for_each_word(p.rank(), max_len, |w, m| {
        let expected = oracle.normal_form_of_matrix(m).expect("within radius");
        assert_eq!(p.reduce(w).letters(), expected, "word {w:?}");
        checked += 1;
    });
    assert!(checked > 0);
}

#[test]
fn reduce_matches_tits_oracle_on_short_words() {
    check_all_words(&hexagon(), 6);
    check_all_words(&pentagon(), 7);
    check_all_words(&CoxeterPresentation::polygon(4).unwrap(), 7);
}

#[test]
fn sphere_sizes_match_oracle() {
    for p in [hexagon(), pentagon()] {
        let oracle = ShortlexOracle::new(&p, 6);
        let ball = p.ball(6).unwrap();
        assert_eq!(ball.sphere_sizes(), oracle.sphere_sizes());
        for k in 0..=6 {
            let ours: Vec<&[Gen]> = ball.sphere(k).iter().map(GroupElement::letters).collect();
            let theirs: Vec<&[Gen]> = oracle.sphere(k).iter().map(Vec::as_slice).collect();
            assert_eq!(ours, theirs, "sphere {k}");
        }
    }
    assert_eq!(hexagon().ball(2).unwrap().sphere_sizes(), vec![1, 6, 24]);
}

#[test]
fn multiply_and_invert_examples() {
    let p = hexagon();
    let s1 = p.element("s1").unwrap();
    let s2 = p.element("s2").unwrap();
    let prod = p.multiply(&s1, &s2);
    assert_eq!(p.distance(&GroupElement::identity(), &prod), 2);
    let oracle = ShortlexOracle::new(&p, 4);
    assert_eq!(prod.letters(), oracle.normal_form(&word(&[0, 1])).unwrap());
    let inv = p.invert(&p.element("s1 s4").unwrap());
    assert_eq!(inv.letters(), oracle.normal_form(&word(&[3, 0])).unwrap());
}

#[test]
fn color_lengths_sum_to_length() {
    let p = hexagon();
    for g in p.ball(4).unwrap().elements() {
        assert_eq!(p.color_lengths(g).iter().sum::<usize>(), g.len());
    }
}

#[test]
fn geodesic_examples() {
    let p = hexagon();
    let e = GroupElement::identity();
    let s1 = p.element("s1").unwrap();
    assert_eq!(p.geodesic(&s1, &s1), vec![s1.clone()]);
    assert_eq!(p.geodesic(&e, &s1), vec![e.clone(), s1.clone()]);
    let path = p.geodesic(&e, &p.element("s1 s3").unwrap());
    assert_eq!(path.len(), 3);
    for i in 0..path.len() {
        for j in 0..path.len() {
            assert_eq!(p.distance(&path[i], &path[j]), i.abs_diff(j));
        }
    }
}

#[test]
fn median_matches_brute_force_search() {
    let p = hexagon();
    let ball = p.ball(3).unwrap();
    let search = p.ball(4).unwrap();
    let elems = ball.elements();
    for (i, x) in elems.iter().enumerate().step_by(7) {
        for y in elems.iter().skip(i % 5).step_by(11) {
            let e = GroupElement::identity();
            let found = brute_medians(&p, &search, &e, x, y);
            assert_eq!(found, vec![p.median(&e, x, y)], "median(1, {x}, {y})");
        }
    }
    let s1 = p.element("s1").unwrap();
    let s13 = p.element("s1 s3").unwrap();
    let e = GroupElement::identity();
    assert_eq!(brute_medians(&p, &ball, &e, &s13, &s1), vec![s1.clone()]);
}

#[test]
fn median_is_between_on_ball_two_triples() {
    let p = pentagon();
    let elems = p.ball(2).unwrap().elements().to_vec();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                let m = p.median(a, b, c);
                for (x, y) in [(a, b), (b, c), (a, c)] {
                    assert_eq!(p.distance(x, &m) + p.distance(&m, y), p.distance(x, y));
                }
                assert_eq!(p.median(b, c, a), m);
            }
        }
    }
}

fn words(n: u8, max: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec((0..n).prop_map(Gen), 0..max)
}

proptest! {
    #[test]
    fn reduction_is_idempotent(w in words(6, 14)) {
        let p = hexagon();
        let g = p.reduce(&w);
        prop_assert_eq!(p.reduce(g.letters()), g);
    }

    #[test]
    fn inserting_relations_preserves_element_and_parity(
        w in words(6, 10),
        pos in 0usize..11,
        x in 0u8..6,
        y in 0u8..6,
    ) {
        let p = hexagon();
        let pos = pos.min(w.len());
        let mut v = w.clone();
        if p.commutes(Gen(x), Gen(y)) {
            v.splice(pos..pos, [Gen(x), Gen(y), Gen(x), Gen(y)]);
        } else {
            v.splice(pos..pos, [Gen(x), Gen(x)]);
        }
        prop_assert_eq!(p.reduce(&v), p.reduce(&w));
        prop_assert_eq!(v.len() % 2, w.len() % 2);
        prop_assert_eq!(p.reduce(&w).len() % 2, w.len() % 2);
    }

    #[test]
    fn reduced_spellings_share_letters(w in words(6, 12), swaps in prop::collection::vec(0usize..12, 0..20)) {
        let p = hexagon();
        let g = p.reduce(&w);
        let mut v = g.letters().to_vec();
        for i in swaps {
            if i + 1 < v.len() && p.commutes(v[i], v[i + 1]) {
                v.swap(i, i + 1);
            }
        }
        prop_assert_eq!(p.reduce(&v), g.clone());
        let mut a = v.clone();
        let mut b = g.letters().to_vec();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cayley_edges_change_length(w in words(5, 14), s in 0u8..5) {
        let p = pentagon();
        let g = p.reduce(&w);
        let h = p.right_multiply(&g, Gen(s));
        prop_assert_eq!(g.len().abs_diff(h.len()), 1);
    }

    #[test]
    fn metric_axioms(a in words(6, 8), b in words(6, 8), c in words(6, 8), g in words(6, 8)) {
        let p = hexagon();
        let (a, b, c, g) = (p.reduce(&a), p.reduce(&b), p.reduce(&c), p.reduce(&g));
        prop_assert_eq!(p.distance(&a, &b), p.distance(&b, &a));
        prop_assert!(p.distance(&a, &c) <= p.distance(&a, &b) + p.distance(&b, &c));
        prop_assert_eq!(
            p.distance(&p.multiply(&g, &a), &p.multiply(&g, &b)),
            p.distance(&a, &b)
        );
        prop_assert!(p.multiply(&a, &p.invert(&a)).is_identity());
    }

    #[test]
    fn median_betweenness(a in words(6, 10), b in words(6, 10), c in words(6, 10)) {
        let p = hexagon();
        let (a, b, c) = (p.reduce(&a), p.reduce(&b), p.reduce(&c));
        let m = p.median(&a, &b, &c);
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            prop_assert_eq!(p.distance(x, &m) + p.distance(&m, y), p.distance(x, y));
        }
    }
}
