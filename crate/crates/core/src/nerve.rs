//! The nerve's 1-skeleton: square detection, chromatic colorings and simplices.

use serde::Serialize;

use crate::group::{gens_of_mask, mask_above, Color, CoxeterPresentation, Gen};

/// Vertex count up to which the chromatic number is computed exactly.
pub const EXACT_COLORING_LIMIT: usize = 24;

/// Commutation graph on the generators.
#[derive(Clone, Debug)]
pub struct Nerve {
    adj: Vec<u64>,
}

/// Four generators spanning an induced 4-cycle: each `s_i` commutes with
/// both `t_j`, while `t1, t2` and `s1, s2` do not commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub t1: Gen,
    pub t2: Gen,
    pub s1: Gen,
    pub s2: Gen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticColoring {
    /// Zero-based color per vertex; colors are numbered by first occurrence.
    pub colors: Vec<usize>,
    pub chromatic_number: usize,
    /// False when the vertex count forced the greedy fallback.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareWitness {
    pub t1: String,
    pub t2: String,
    pub s1: String,
    pub s2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveAnalysis {
    pub hyperbolic: bool,
    pub square_witness: Option<SquareWitness>,
    pub chromatic_number: usize,
    pub chromatic_exact: bool,
    /// Generator name to one-based color, in generator order.
    pub coloring: Vec<(String, usize)>,
}

impl Nerve {
    pub fn from_adjacency(adj: Vec<u64>) -> Self {
        Self { adj }
    }

    pub fn from_presentation(p: &CoxeterPresentation) -> Self {
        Self::from_adjacency(p.adjacency().to_vec())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Self { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] & (1 << b) != 0
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn is_square(&self, sq: &Square) -> bool {
        let (t1, t2, s1, s2) = (sq.t1.index(), sq.t2.index(), sq.s1.index(), sq.s2.index());
        let distinct = [t1, t2, s1, s2];
        for i in 0..4 {
            for j in i + 1..4 {
                if distinct[i] == distinct[j] {
                    return false;
                }
            }
        }
        self.adjacent(s1, t1)
            && self.adjacent(s1, t2)
            && self.adjacent(s2, t1)
            && self.adjacent(s2, t2)
            && !self.adjacent(t1, t2)
            && !self.adjacent(s1, s2)
    }

    /// The first induced 4-cycle found over non-adjacent pairs `(t1, t2)`.
    pub fn find_square(&self) -> Option<Square> {
        let n = self.len();
        for t1 in 0..n {
            for t2 in t1 + 1..n {
                if self.adjacent(t1, t2) {
                    continue;
                }
                let common = self.adj[t1] & self.adj[t2];
                for s1 in gens_of_mask(common) {
                    let rest = common & !self.adj[s1.index()] & mask_above(s1);
                    if let Some(s2) = gens_of_mask(rest).next() {
                        return Some(Square {
                            t1: Gen(t1 as u8),
                            t2: Gen(t2 as u8),
                            s1,
                            s2,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.find_square().is_none()
    }

    pub fn validate_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.len()
            && (0..self.len()).all(|v| {
                gens_of_mask(self.adj[v]).all(|u| colors[u.index()] != colors[v])
            })
    }

    pub fn chromatic_coloring(&self) -> ChromaticColoring {
        let n = self.len();
        let order = self.degree_order();
        let greedy = self.greedy(&order);
        let exact = n <= EXACT_COLORING_LIMIT;
        let raw = if exact {
            let mut best = greedy.clone();
            let mut best_k = count_colors(&best);
            let mut cur = vec![usize::MAX; n];
            self.branch(&order, 0, 0, &mut cur, &mut best, &mut best_k);
            best
        } else {
            greedy
        };
        let colors = relabel_by_first_occurrence(&raw);
        ChromaticColoring {
            chromatic_number: count_colors(&colors),
            colors,
            exact,
        }
    }

    fn degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.adj[v].count_ones()), v));
        order
    }

    fn greedy(&self, order: &[usize]) -> Vec<usize> {
        let mut colors = vec![usize::MAX; self.len()];
        for &v in order {
            let mut c = 0;
            while gens_of_mask(self.adj[v]).any(|u| colors[u.index()] == c) {
                c += 1;
            }
            colors[v] = c;
        }
        colors
    }

    fn branch(
        &self,
        order: &[usize],
        depth: usize,
        used: usize,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
        best_k: &mut usize,
    ) {
        if used >= *best_k {
            return;
        }
        if depth == order.len() {
            *best = cur.clone();
            *best_k = used;
            return;
        }
        let v = order[depth];
        for c in 0..=used.min(*best_k - 1) {
            if gens_of_mask(self.adj[v]).any(|u| cur[u.index()] == c) {
                continue;
            }
            cur[v] = c;
            self.branch(order, depth + 1, used.max(c + 1), cur, best, best_k);
            cur[v] = usize::MAX;
        }
    }

    /// All nonempty cliques avoiding the vertices in `excluded`, as masks in
    /// increasing numeric order.
    pub fn cliques_avoiding(&self, excluded: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let allowed: u64 = (0..self.len()).fold(0, |m, v| m | 1 << v) & !excluded;
        self.extend_cliques(0, allowed, &mut out);
        out.sort_unstable();
        out
    }

    fn extend_cliques(&self, clique: u64, candidates: u64, out: &mut Vec<u64>) {
        for v in gens_of_mask(candidates) {
            let next = clique | v.bit();
            out.push(next);
            let higher = candidates & mask_above(v);
            self.extend_cliques(next, higher & self.adj[v.index()], out);
        }
    }
}

fn count_colors(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

fn relabel_by_first_occurrence(colors: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    colors
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

/// Nonempty simplices of the nerve without a vertex of color `excluded`.
pub fn enumerate_simplices(p: &CoxeterPresentation, excluded: Color) -> Vec<u64> {
    Nerve::from_presentation(p).cliques_avoiding(p.color_mask(excluded))
}

pub fn analyze(p: &CoxeterPresentation) -> NerveAnalysis {
    let nerve = Nerve::from_presentation(p);
    let square = nerve.find_square();
    let chromatic = nerve.chromatic_coloring();
    NerveAnalysis {
        hyperbolic: square.is_none(),
        square_witness: square.map(|sq| SquareWitness {
            t1: p.name(sq.t1).to_string(),
            t2: p.name(sq.t2).to_string(),
            s1: p.name(sq.s1).to_string(),
            s2: p.name(sq.s2).to_string(),
        }),
        chromatic_number: chromatic.chromatic_number,
        chromatic_exact: chromatic.exact,
        coloring: p
            .generators()
            .map(|g| (p.name(g).to_string(), p.color(g).number()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Nerve {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Nerve::from_edges(n, &edges)
    }

    #[test]
    fn four_cycle_is_a_square() {
        let sq = cycle(4).find_square().unwrap();
        assert_eq!((sq.t1, sq.t2, sq.s1, sq.s2), (Gen(0), Gen(2), Gen(1), Gen(3)));
        assert!(cycle(4).is_square(&sq));
    }

    #[test]
    fn long_cycles_have_no_square() {
        assert!(cycle(5).find_square().is_none());
        assert!(cycle(6).find_square().is_none());
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(Nerve::from_edges(1, &[]).chromatic_coloring().chromatic_number, 1);
        assert_eq!(cycle(6).chromatic_coloring().chromatic_number, 2);
        assert_eq!(cycle(5).chromatic_coloring().chromatic_number, 3);
        let c = cycle(6).chromatic_coloring();
        assert_eq!(c.colors, vec![0, 1, 0, 1, 0, 1]);
        assert!(c.exact);
    }

    #[test]
    fn greedy_beyond_limit() {
        let c = cycle(30).chromatic_coloring();
        assert!(!c.exact);
        assert!(cycle(30).validate_coloring(&c.colors));
    }

    #[test]
    fn coloring_validation() {
        assert!(cycle(6).validate_coloring(&[0, 1, 0, 1, 0, 1]));
        assert!(!Nerve::from_edges(2, &[(0, 1)]).validate_coloring(&[0, 0]));
    }

    #[test]
    fn simplices_of_hexagon_avoiding_a() {
        let p = CoxeterPresentation::polygon(6).unwrap();
        let a = p.color(Gen(0));
        assert_eq!(
            enumerate_simplices(&p, a),
            vec![Gen(1).bit(), Gen(3).bit(), Gen(5).bit()]
        );
    }

    #[test]
    fn simplices_of_star() {
        // K_{1,2}: centre x commutes with y and z.
        let p = CoxeterPresentation::new(
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1), (0, 2)],
            None,
        )
        .unwrap();
        let centre = p.color(Gen(0));
        assert_eq!(enumerate_simplices(&p, centre), vec![Gen(1).bit(), Gen(2).bit()]);
        let single = CoxeterPresentation::new(vec!["x".into()], &[], None).unwrap();
        assert!(enumerate_simplices(&single, Color(0)).is_empty());
    }
}
