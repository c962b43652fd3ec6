use proptest::prelude::*;
use racg::embedding::{
    augmented_diary, augmented_labels, diary_entries, diary_map, distortion_report,
    periodic_counterexample, product_distance, psi, psi_component, reconstruct_cut,
    reconstruct_prefix, tree_distance, window_inner_len, CutContext, DiaryEntry, Reconstruction,
    TreeVertex,
};
use racg::group::{CoxeterPresentation, Gen, GroupElement};
use racg::morse_thue::{decorate, find_cube};
use racg::normal_form::{canonical_a_representation, ALetter, ARepresentation};

fn hexagon() -> CoxeterPresentation {
    CoxeterPresentation::polygon(6).unwrap()
}

fn pentagon() -> CoxeterPresentation {
    CoxeterPresentation::polygon(5).unwrap()
}

/// Diary by direct bookkeeping over letter positions: before the `i`-th base
/// letter, the last κ positions of the prefix not yet marked as recorded.
fn diary_oracle(rep: &ARepresentation, kappa: usize) -> Vec<DiaryEntry> {
    let word = rep.a_word();
    let mut recorded = vec![false; word.len()];
    let mut out = Vec::new();
    for (pos, letter) in word.iter().enumerate() {
        if !letter.is_base() {
            continue;
        }
        let open: Vec<usize> = (0..pos).filter(|&q| !recorded[q]).collect();
        let chosen = &open[open.len().saturating_sub(kappa)..];
        let mut slots: Vec<Option<ALetter>> = vec![None; kappa - chosen.len()];
        for &q in chosen {
            recorded[q] = true;
            slots.push(Some(word[q]));
        }
        out.push(DiaryEntry::new(slots));
    }
    out
}

#[test]
fn diaries_match_bookkeeping_oracle() {
    for p in [hexagon(), pentagon()] {
        for g in p.ball(5).unwrap().elements() {
            for a in p.colors() {
                let rep = canonical_a_representation(&p, g, a).unwrap();
                for kappa in [1, 2, 3] {
                    let entries = diary_entries(&rep, kappa);
                    assert_eq!(entries, diary_oracle(&rep, kappa), "{}", p.format(g));
                    assert_eq!(entries.len(), p.color_length(g, a).unwrap());
                    for e in &entries {
                        assert_eq!(e.kappa(), kappa);
                        let first = e.slots().iter().position(Option::is_some).unwrap_or(kappa);
                        assert!(e.slots()[first..].iter().all(Option::is_some));
                    }
                    let aug = augmented_diary(&p, g, a, kappa).unwrap();
                    assert_eq!(aug.depth(), entries.len());
                    for (label, &letter) in aug.labels().iter().zip(rep.base_letters()) {
                        assert_eq!(label.letter, letter);
                    }
                }
            }
        }
    }
}

#[test]
fn diary_examples() {
    let p = hexagon();
    let a = p.color(Gen(0));
    let s4 = Some(ALetter::Simplex(racg::normal_form::Simplex::singleton(Gen(3))));
    let d = diary_map(&p, &p.element("s4 s1").unwrap(), a, 2).unwrap();
    assert_eq!(d.labels(), &[DiaryEntry::new(vec![None, s4])]);
    let d = diary_map(&p, &p.element("s1 s3").unwrap(), a, 2).unwrap();
    assert_eq!(
        d.labels(),
        &[DiaryEntry::blank(2), DiaryEntry::new(vec![None, Some(ALetter::Base(Gen(0)))])]
    );
    assert!(diary_map(&p, &GroupElement::identity(), a, 2).unwrap().is_root());
    assert!(diary_map(&p, &GroupElement::identity(), a, 0).is_err());
}

#[test]
fn radial_isometry_and_edge_lipschitz() {
    for (p, radius) in [(hexagon(), 6), (pentagon(), 5)] {
        let ball = p.ball(radius).unwrap();
        let table = ball.neighbor_table(&p);
        for kappa in [2, 4] {
            let pts: Vec<_> = ball.elements().iter().map(|g| psi(&p, g, kappa).unwrap()).collect();
            for (g, pt) in ball.elements().iter().zip(&pts) {
                assert_eq!(pt.norm(), g.len(), "{}", p.format(g));
            }
            for i in 0..ball.len() {
                for s in 0..p.rank() {
                    if let Some(j) = table[i * p.rank() + s] {
                        assert!(product_distance(&pts[i], &pts[j]) <= 1);
                    }
                }
            }
        }
    }
}

#[test]
fn monotone_growth_along_geodesics() {
    let p = hexagon();
    for g in p.ball(6).unwrap().sphere(6).iter().step_by(37) {
        let path = p.geodesic(&GroupElement::identity(), g);
        let norms: Vec<usize> = path.iter().map(|x| psi(&p, x, 3).unwrap().norm()).collect();
        assert!(norms.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn pairwise_lipschitz_and_injectivity() {
    let r = distortion_report(&hexagon(), 4, 2, 0, 7).unwrap();
    assert!(r.exhaustive);
    assert_eq!(r.lipschitz_violations, 0);
    assert_eq!(r.radial_violations, 0);
    assert!(r.histogram.iter().all(|row| row.d_t <= row.d));
    let r = distortion_report(&pentagon(), 4, 3, 0, 7).unwrap();
    assert_eq!(r.lipschitz_violations, 0);

    let p = hexagon();
    let ball = p.ball(6).unwrap();
    let mut images: Vec<_> = ball.elements().iter().map(|g| psi(&p, g, 4).unwrap()).collect();
    let n = images.len();
    images.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
    images.dedup();
    assert_eq!(images.len(), n);
}

#[test]
fn sampled_report_is_deterministic() {
    let p = hexagon();
    let a = distortion_report(&p, 5, 3, 5_000, 42).unwrap();
    let b = distortion_report(&p, 5, 3, 5_000, 42).unwrap();
    assert!(!a.exhaustive);
    assert_eq!(a, b);
    assert_eq!(a.histogram_csv(), b.histogram_csv());
    assert_eq!(a.pairs, 5_000);
    assert!(a.max_ratio >= 1.0);
}

/// True `W_j a_j` as 𝒜-letters, `j` one-based.
fn truth(rep: &ARepresentation, j: usize) -> Vec<ALetter> {
    let mut w: Vec<ALetter> = rep.coefficient(j - 1).iter().map(|s| ALetter::Simplex(*s)).collect();
    w.push(ALetter::Base(rep.base_letters()[j - 1]));
    w
}

fn check_windows(p: &CoxeterPresentation, g: &GroupElement, kappa: usize) -> (usize, usize) {
    let (mut full, mut partial) = (0, 0);
    for a in p.colors() {
        let rep = decorate(p, &canonical_a_representation(p, g, a).unwrap());
        let labels = augmented_labels(&rep, kappa);
        let q = labels.len();
        for j in 1..=q {
            for r in 0..=q - j {
                let ctx = CutContext {
                    first: j,
                    kappa,
                    inner_len: window_inner_len(&rep, j, r),
                };
                let window = &labels[j - 1..j + r];
                let k = ctx.bound(r + 1);
                let got = reconstruct_cut(window, &ctx);
                if k < 1 {
                    assert!(got.is_err());
                    continue;
                }
                let expected = truth(&rep, j);
                match got.unwrap() {
                    Reconstruction::Full(w) => {
                        assert_eq!(w, expected, "{} j={j} r={r}", p.format(g));
                        full += 1;
                    }
                    Reconstruction::Partial(w) => {
                        assert!(expected.ends_with(&w), "{} j={j} r={r}", p.format(g));
                        assert!(w.len() >= (k as usize).min(expected.len()));
                        partial += 1;
                    }
                }
            }
        }
        if q == 0 {
            assert!(reconstruct_prefix(&labels).is_err());
        } else if let Some(prefix) = reconstruct_prefix(&labels).unwrap() {
            let word = rep.a_word();
            assert_eq!(prefix[..], word[..prefix.len()]);
        }
    }
    (full, partial)
}

#[test]
fn reconstruction_windows_match_truth() {
    let p = hexagon();
    let mut totals = (0, 0);
    for g in p.ball(6).unwrap().elements() {
        let (f, q) = check_windows(&p, g, 3);
        totals = (totals.0 + f, totals.1 + q);
    }
    assert!(totals.0 > 0 && totals.1 > 0, "{totals:?}");
    let pent = pentagon();
    for g in pent.ball(5).unwrap().elements() {
        check_windows(&pent, g, 2);
    }
    let a = p.element("s1").unwrap();
    let rep = canonical_a_representation(&p, &a, p.color(Gen(0))).unwrap();
    let labels = augmented_labels(&rep, 3);
    let ctx = CutContext { first: 1, kappa: 3, inner_len: 0 };
    assert_eq!(
        reconstruct_cut(&labels, &ctx).unwrap(),
        Reconstruction::Full(vec![ALetter::Base(Gen(0))])
    );
}

#[test]
fn periodic_example() {
    let p = hexagon();
    let b = p.parse_word("s2 s4").unwrap();
    let a = p.parse_word("s1 s3 s1").unwrap();
    let r = periodic_counterexample(&p, &b, &a, 8, 2).unwrap();
    assert_eq!(r.d, 2 * a.len() + b.len());
    assert_eq!(r.d, 8);
    assert_eq!(r.undecorated_diary_distance, 2);
    assert!(r.decorated_psi_distance > 2);
    let bad = p.parse_word("s2 s4 s2").unwrap();
    assert!(periodic_counterexample(&p, &bad, &a, 8, 2).is_err());
}

#[test]
fn decorated_letters_are_cube_free() {
    let p = hexagon();
    let a = p.color(Gen(0));
    let b = p.color(Gen(1));
    let mut word = Vec::new();
    for _ in 0..40 {
        word.extend(p.parse_word("s2 s4").unwrap());
    }
    word.extend(p.parse_word("s1 s3 s1").unwrap());
    let g = p.reduce(&word);
    assert_eq!(g.len(), word.len());
    let rep = decorate(&p, &canonical_a_representation(&p, &g, a).unwrap());
    let seq: Vec<u8> = rep
        .coefficients()
        .iter()
        .flatten()
        .flat_map(|s| s.gens().filter(|&x| p.color(x) == b).map(move |x| x.0 * 2 + s.bit(x)))
        .collect();
    assert_eq!(seq.len(), 80);
    assert_eq!(find_cube(&seq), None);
    let plain: Vec<u8> = seq.iter().map(|x| x / 2).collect();
    assert!(find_cube(&plain).is_some());
}

fn vertex(labels: Vec<u8>) -> TreeVertex<u8> {
    TreeVertex::from_labels(labels)
}

#[test]
fn tree_distance_examples() {
    assert_eq!(tree_distance(&TreeVertex::<u8>::root(), &vertex(vec![1])), 1);
    assert_eq!(tree_distance(&vertex(vec![1, 2]), &vertex(vec![1, 3])), 2);
    let p = hexagon();
    let e = psi(&p, &GroupElement::identity(), 2).unwrap();
    assert!(e.components().iter().all(TreeVertex::is_root));
    let c = psi_component(&p, &p.element("s1").unwrap(), p.color(Gen(0)), 2).unwrap();
    assert_eq!(c.depth(), 1);
}

proptest! {
    #[test]
    fn tree_metric_axioms(
        x in prop::collection::vec(0u8..3, 0..6),
        y in prop::collection::vec(0u8..3, 0..6),
        z in prop::collection::vec(0u8..3, 0..6),
    ) {
        let (x, y, z) = (vertex(x), vertex(y), vertex(z));
        prop_assert_eq!(tree_distance(&x, &y), tree_distance(&y, &x));
        prop_assert!(tree_distance(&x, &z) <= tree_distance(&x, &y) + tree_distance(&y, &z));
        prop_assert_eq!(tree_distance(&x, &TreeVertex::root()), x.depth());
        prop_assert_eq!(tree_distance(&x, &x), 0);
    }

    #[test]
    fn psi_lipschitz_on_random_pairs(
        u in prop::collection::vec((0u8..6).prop_map(Gen), 0..12),
        v in prop::collection::vec((0u8..6).prop_map(Gen), 0..12),
        kappa in 1usize..5,
    ) {
        let p = hexagon();
        let (g, h) = (p.reduce(&u), p.reduce(&v));
        let (x, y) = (psi(&p, &g, kappa).unwrap(), psi(&p, &h, kappa).unwrap());
        prop_assert!(product_distance(&x, &y) <= p.distance(&g, &h));
        prop_assert_eq!(x.norm(), g.len());
    }
}
