use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;
use racg::group::{CoxeterPresentation, Gen};
use racg::morse_thue::{
    assert_cube_free, decorate, decorate_from, find_cube, mt, mt_prefix, Cube, DecorationStream,
};
use racg::normal_form::{canonical_a_representation, canonical_of_word};
use racg_oracle::substitution_prefix;

/// Cube search by comparing every candidate triple of blocks.
fn naive_cube(seq: &[u8]) -> Option<Cube> {
    for offset in 0..seq.len() {
        for block in 1..=(seq.len() - offset) / 3 {
            let w = &seq[offset..offset + block];
            if w == &seq[offset + block..offset + 2 * block] && w == &seq[offset + 2 * block..offset + 3 * block] {
                return Some(Cube { offset, block });
            }
        }
    }
    None
}

#[test]
fn popcount_matches_substitution() {
    assert_eq!(mt_prefix(1 << 16), substitution_prefix(16));
    assert_eq!(mt_prefix(8), vec![0, 1, 1, 0, 1, 0, 0, 1]);
    assert_eq!(mt(0), 0);
}

#[test]
fn long_prefix_is_cube_free() {
    assert_eq!(assert_cube_free(1 << 16).unwrap(), None);
    assert_eq!(naive_cube(&mt_prefix(600)), None);
}

#[test]
fn cube_examples() {
    assert_eq!(find_cube(&[0, 0, 0]), Some(Cube { offset: 0, block: 1 }));
    assert_eq!(find_cube(&[]), None);
}

fn spellings(p: &CoxeterPresentation, word: &[Gen]) -> Vec<Vec<Gen>> {
    let mut seen = HashSet::from([word.to_vec()]);
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if p.commutes(w[i], w[i + 1]) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[test]
fn decoration_is_spelling_independent() {
    for p in [CoxeterPresentation::polygon(6).unwrap(), CoxeterPresentation::polygon(5).unwrap()] {
        for g in p.ball(5).unwrap().elements() {
            for a in p.colors() {
                let expected = decorate(&p, &canonical_a_representation(&p, g, a).unwrap());
                for w in spellings(&p, g.letters()) {
                    let d = decorate(&p, &canonical_of_word(&p, &w, a).unwrap());
                    assert_eq!(d, expected);
                }
            }
        }
    }
}

#[test]
fn decoration_follows_sequence_per_color() {
    let p = CoxeterPresentation::polygon(5).unwrap();
    for g in p.ball(5).unwrap().elements() {
        for a in p.colors() {
            let d = decorate(&p, &canonical_a_representation(&p, g, a).unwrap());
            let mut seen = vec![0u64; p.num_colors()];
            for s in d.coefficients().iter().flatten() {
                for x in s.gens() {
                    let c = p.color(x).index();
                    assert_eq!(s.bit(x), mt(seen[c]));
                    seen[c] += 1;
                }
            }
        }
    }
    let hex = CoxeterPresentation::polygon(6).unwrap();
    let a = hex.color(Gen(0));
    let rep = canonical_of_word(&hex, &hex.parse_word("s2 s4 s1 s3").unwrap(), a).unwrap();
    assert_eq!(decorate(&hex, &rep).display(&hex).to_string(), "[s2^0] [s4^1] s1 s3");
    let plain = canonical_of_word(&hex, &hex.parse_word("s1 s3 s5").unwrap(), a).unwrap();
    assert_eq!(decorate(&hex, &plain).undecorated(), plain);
}

#[test]
fn offset_stream_shifts_bits() {
    let p = CoxeterPresentation::polygon(6).unwrap();
    let a = p.color(Gen(0));
    let rep = canonical_of_word(&p, &p.parse_word("s2 s4 s1 s3").unwrap(), a).unwrap();
    let mut stream = DecorationStream::with_offsets(&[0, 1]);
    let d = decorate_from(&p, &rep, &mut stream);
    assert_eq!(d.display(&p).to_string(), "[s2^1] [s4^1] s1 s3");
    assert_eq!(stream.counters(), &[0, 3]);
}

proptest! {
    #[test]
    fn fast_cube_search_matches_naive(seq in prop::collection::vec(0u8..2, 0..60)) {
        prop_assert_eq!(find_cube(&seq), naive_cube(&seq));
    }

    #[test]
    fn ternary_cube_search_matches_naive(seq in prop::collection::vec(0u8..3, 0..60)) {
        prop_assert_eq!(find_cube(&seq), naive_cube(&seq));
    }

    #[test]
    fn stream_counters_are_monotone(colors in prop::collection::vec(0u8..3, 0..50)) {
        let mut stream = DecorationStream::new(3);
        let mut last = stream.counters().to_vec();
        for c in colors {
            let i = stream.counters()[c as usize];
            prop_assert_eq!(stream.next(racg::group::Color(c)), mt(i));
            let now = stream.counters().to_vec();
            prop_assert!(now.iter().zip(&last).all(|(x, y)| x >= y));
            last = now;
        }
    }
}
