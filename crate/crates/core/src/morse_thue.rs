//! The Morse–Thue sequence, cube detection, and decoration of canonical forms.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Color, CoxeterPresentation};
use crate::normal_form::ARepresentation;

/// Largest prefix [`assert_cube_free`] will scan.
pub const CUBE_SCAN_LIMIT: usize = 1 << 20;

/// Bit `i` of the Morse–Thue sequence: parity of the binary digit sum.
pub fn mt(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

pub fn mt_prefix(n: usize) -> Vec<u8> {
    (0..n as u64).map(mt).collect()
}

/// Three consecutive equal blocks `seq[offset..offset + 3 * block]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub offset: usize,
    pub block: usize,
}

/// The cube with the smallest offset, ties broken by the shortest block.
///
/// For each block length `L`, a cube at `o` means `seq[i] == seq[i + L]` for
/// every `i` in `o..o + 2L`, so it suffices to find a run of that length.
pub fn find_cube(seq: &[u8]) -> Option<Cube> {
    let n = seq.len();
    (1..=n / 3)
        .into_par_iter()
        .filter_map(|block| {
            let mut run = 0;
            for i in 0..n - block {
                if seq[i] == seq[i + block] {
                    run += 1;
                    if run == 2 * block {
                        return Some(Cube {
                            offset: i + 1 - 2 * block,
                            block,
                        });
                    }
                } else {
                    run = 0;
                }
            }
            None
        })
        .min_by_key(|c| (c.offset, c.block))
}

/// Scans the first `n` Morse–Thue bits for a cube.
pub fn assert_cube_free(n: usize) -> Result<Option<Cube>> {
    if n > CUBE_SCAN_LIMIT {
        return Err(Error::Budget(format!(
            "cube scan of {n} bits exceeds {CUBE_SCAN_LIMIT}"
        )));
    }
    Ok(find_cube(&mt_prefix(n)))
}

/// Per-color counters handing out successive Morse–Thue bits.
#[derive(Clone, Debug)]
pub struct DecorationStream {
    counters: Vec<u64>,
}

impl DecorationStream {
    pub fn new(num_colors: usize) -> Self {
        Self::with_offsets(&vec![0; num_colors])
    }

    /// Starts color `c` at index `offsets[c]`.
    pub fn with_offsets(offsets: &[u64]) -> Self {
        Self {
            counters: offsets.to_vec(),
        }
    }

    pub fn next(&mut self, c: Color) -> u8 {
        let i = self.counters[c.index()];
        self.counters[c.index()] += 1;
        mt(i)
    }

    pub fn counters(&self) -> &[u64] {
        &self.counters
    }
}

/// Gives the `i`-th letter of each non-base color, counted from 0 along the
/// canonical word, the bit `t(i)`.
pub fn decorate(p: &CoxeterPresentation, rep: &ARepresentation) -> ARepresentation {
    decorate_from(p, rep, &mut DecorationStream::new(p.num_colors()))
}

pub fn decorate_from(
    p: &CoxeterPresentation,
    rep: &ARepresentation,
    stream: &mut DecorationStream,
) -> ARepresentation {
    let decorations: Vec<Vec<u64>> = rep
        .coefficients()
        .iter()
        .map(|coeff| {
            coeff
                .iter()
                .map(|s| {
                    s.gens().fold(0u64, |d, g| {
                        if stream.next(p.color(g)) == 1 {
                            d | g.bit()
                        } else {
                            d
                        }
                    })
                })
                .collect()
        })
        .collect();
    rep.with_decorations(&decorations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Gen;
    use crate::normal_form::canonical_of_word;

    #[test]
    fn first_bits() {
        assert_eq!(mt_prefix(8), vec![0, 1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(mt(0), 0);
    }

    #[test]
    fn cubes() {
        assert_eq!(find_cube(&[0, 0, 0]), Some(Cube { offset: 0, block: 1 }));
        assert_eq!(find_cube(&[1, 0, 1, 0, 1, 0]), Some(Cube { offset: 0, block: 2 }));
        assert_eq!(find_cube(&[1, 0, 0, 1, 0, 0, 1, 0, 0]), Some(Cube { offset: 0, block: 3 }));
        assert_eq!(find_cube(&[1, 1, 0, 0, 0]), Some(Cube { offset: 2, block: 1 }));
        assert_eq!(assert_cube_free(8).unwrap(), None);
        assert!(assert_cube_free(CUBE_SCAN_LIMIT + 1).is_err());
    }

    #[test]
    fn hexagon_decoration() {
        let p = CoxeterPresentation::polygon(6).unwrap();
        let a = p.color(Gen(0));
        let rep = canonical_of_word(&p, &p.parse_word("s2 s4 s1 s3").unwrap(), a).unwrap();
        assert_eq!(rep.display(&p).to_string(), "[s2] [s4] s1 s3");
        let d = decorate(&p, &rep);
        assert_eq!(d.display(&p).to_string(), "[s2^0] [s4^1] s1 s3");
        let plain = canonical_of_word(&p, &p.parse_word("s1 s3").unwrap(), a).unwrap();
        assert_eq!(decorate(&p, &plain).undecorated(), plain);
    }
}
