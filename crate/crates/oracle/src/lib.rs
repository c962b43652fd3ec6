//! Slow reference implementations. Nothing here calls the word-reduction code
//! of `racg` except where noted; group elements are identified through the
//! faithful integer Tits representation.

use std::collections::{HashMap, HashSet, VecDeque};

use racg::group::{Ball, CoxeterPresentation, Gen, GroupElement};
use racg::walls::WallSet;

/// Integer matrices of the Tits representation: `s_i(e_j) = e_j − 2 B_ij e_i`
/// with `B_ii = 1`, `B_ij = 0` for commuting pairs and `−1` otherwise.
#[derive(Clone, Debug)]
pub struct Tits {
    n: usize,
    b: Vec<i64>,
}

pub type Matrix = Vec<i64>;

impl Tits {
    pub fn new(p: &CoxeterPresentation) -> Self {
        let n = p.rank();
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = if i == j {
                    1
                } else if p.commutes(Gen(i as u8), Gen(j as u8)) {
                    0
                } else {
                    -1
                };
            }
        }
        Self { n, b }
    }

    pub fn identity(&self) -> Matrix {
        let mut m = vec![0; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    /// `m ← m · S_i`.
    pub fn right_apply(&self, m: &mut Matrix, g: Gen) {
        let n = self.n;
        let i = g.index();
        for r in 0..n {
            let x = m[r * n + i];
            if x != 0 {
                for c in 0..n {
                    m[r * n + c] -= 2 * x * self.b[i * n + c];
                }
            }
        }
    }

    pub fn word(&self, word: &[Gen]) -> Matrix {
        let mut m = self.identity();
        for &g in word {
            self.right_apply(&mut m, g);
        }
        m
    }
}

/// Shortlex-least words of every element up to a radius, found by
/// breadth-first search over Tits matrices: words of each length are extended
/// in lexicographic order and the first word reaching a matrix wins.
pub struct ShortlexOracle {
    pub tits: Tits,
    pub radius: usize,
    classes: HashMap<Matrix, Vec<Gen>>,
    spheres: Vec<Vec<Vec<Gen>>>,
}

impl ShortlexOracle {
    pub fn new(p: &CoxeterPresentation, radius: usize) -> Self {
        let tits = Tits::new(p);
        let mut classes = HashMap::new();
        classes.insert(tits.identity(), Vec::new());
        let mut spheres = vec![vec![Vec::new()]];
        let mut frontier: Vec<(Vec<Gen>, Matrix)> = vec![(Vec::new(), tits.identity())];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (w, m) in &frontier {
                for g in 0..p.rank() as u8 {
                    let mut m2 = m.clone();
                    tits.right_apply(&mut m2, Gen(g));
                    if !classes.contains_key(&m2) {
                        let mut w2 = w.clone();
                        w2.push(Gen(g));
                        classes.insert(m2.clone(), w2.clone());
                        next.push((w2, m2));
                    }
                }
            }
            spheres.push(next.iter().map(|(w, _)| w.clone()).collect());
            frontier = next;
        }
        Self {
            tits,
            radius,
            classes,
            spheres,
        }
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.spheres.iter().map(Vec::len).collect()
    }

    pub fn sphere(&self, k: usize) -> &[Vec<Gen>] {
        &self.spheres[k]
    }

    pub fn normal_form(&self, word: &[Gen]) -> Option<&[Gen]> {
        self.classes.get(&self.tits.word(word)).map(Vec::as_slice)
    }

    pub fn normal_form_of_matrix(&self, m: &Matrix) -> Option<&[Gen]> {
        self.classes.get(m).map(Vec::as_slice)
    }

    /// Calls `f` on every word of length at most `max_len` with its matrix.
    pub fn for_each_word(&self, rank: usize, max_len: usize, mut f: impl FnMut(&[Gen], &Matrix)) {
        let mut word = Vec::with_capacity(max_len);
        let mut stack = vec![self.tits.identity()];
        self.walk(rank, max_len, &mut word, &mut stack, &mut f);
    }

    fn walk(
        &self,
        rank: usize,
        max_len: usize,
        word: &mut Vec<Gen>,
        stack: &mut Vec<Matrix>,
        f: &mut impl FnMut(&[Gen], &Matrix),
    ) {
        f(word, stack.last().expect("nonempty"));
        if word.len() == max_len {
            return;
        }
        for g in 0..rank as u8 {
            let mut m = stack.last().expect("nonempty").clone();
            self.tits.right_apply(&mut m, Gen(g));
            word.push(Gen(g));
            stack.push(m);
            self.walk(rank, max_len, word, stack, f);
            stack.pop();
            word.pop();
        }
    }
}

/// Morse–Thue bits by `0 → 01`, `1 → 10` applied `rounds` times to `0`.
pub fn substitution_prefix(rounds: usize) -> Vec<u8> {
    let mut seq = vec![0u8];
    for _ in 0..rounds {
        seq = seq.iter().flat_map(|&b| [b, 1 - b]).collect();
    }
    seq
}

/// Every element of the ball lying between each pair of `x, y, z`.
pub fn brute_medians(
    p: &CoxeterPresentation,
    ball: &Ball,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
) -> Vec<GroupElement> {
    let between = |a: &GroupElement, b: &GroupElement, d: &GroupElement| {
        p.distance(a, d) + p.distance(d, b) == p.distance(a, b)
    };
    ball.elements()
        .iter()
        .filter(|d| between(x, y, d) && between(y, z, d) && between(x, z, d))
        .cloned()
        .collect()
}

/// Induced 4-cycles by scanning all ordered 4-tuples.
pub fn brute_has_square(adj: &[u64]) -> bool {
    let n = adj.len();
    let e = |a: usize, b: usize| adj[a] & (1 << b) != 0;
    for t1 in 0..n {
        for t2 in 0..n {
            for s1 in 0..n {
                for s2 in 0..n {
                    let v = [t1, t2, s1, s2];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| v[i] != v[j]));
                    if distinct
                        && e(s1, t1)
                        && e(s1, t2)
                        && e(s2, t1)
                        && e(s2, t2)
                        && !e(t1, t2)
                        && !e(s1, s2)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Smallest `k` admitting a proper coloring, by trying all `k^n` assignments.
pub fn brute_chromatic_number(adj: &[u64]) -> usize {
    let n = adj.len();
    for k in 1..=n.max(1) {
        let total = (k as u64).pow(n as u32);
        for code in 0..total {
            let mut c = vec![0usize; n];
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = (x % k as u64) as usize;
                x /= k as u64;
            }
            let proper = (0..n).all(|v| (0..n).all(|u| adj[v] & (1 << u) == 0 || c[u] != c[v]));
            if proper {
                return k;
            }
        }
    }
    n
}

/// Nonempty vertex subsets that are cliques and avoid `excluded`.
pub fn brute_cliques(adj: &[u64], excluded: u64) -> Vec<u64> {
    let n = adj.len();
    (1u64..1 << n)
        .filter(|&s| s & excluded == 0)
        .filter(|&s| {
            (0..n).all(|v| s & (1 << v) == 0 || (s & !(1 << v)) & !adj[v] == 0)
        })
        .collect()
}

/// Edges `(lower endpoint, generator)` of the ball grouped by the matrix of
/// the reflection `g s g⁻¹`.
pub fn edge_partition(p: &CoxeterPresentation, ball: &Ball) -> Vec<Vec<(usize, Gen)>> {
    let tits = Tits::new(p);
    let mut classes: HashMap<Matrix, Vec<(usize, Gen)>> = HashMap::new();
    for (i, g) in ball.elements().iter().enumerate() {
        for s in p.generators() {
            let h = p.right_multiply(g, s);
            if h.len() > g.len() && ball.contains(&h) {
                let mut word: Vec<Gen> = g.letters().to_vec();
                word.push(s);
                word.extend(g.letters().iter().rev());
                classes.entry(tits.word(&word)).or_default().push((i, s));
            }
        }
    }
    let mut out: Vec<Vec<(usize, Gen)>> = classes.into_values().collect();
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Levels by repeated flooding: for each color, the walls of that color met by
/// a search from the identity chamber that may only cross walls of other
/// colors, or of this color with a level already assigned, get the next level.
pub fn peeling_levels(ws: &WallSet, ids: &[u32]) -> Vec<Option<usize>> {
    let p = ws.presentation();
    let ball = ws.ball();
    let mut level: Vec<Option<usize>> = vec![None; ws.len()];
    let colors: HashSet<u32> = ids.iter().copied().collect();
    let mut colors: Vec<u32> = colors.into_iter().collect();
    colors.sort_unstable();
    for f in colors {
        let mut current = 1;
        loop {
            let mut seen = vec![false; ball.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut touched = Vec::new();
            while let Some(i) = queue.pop_front() {
                for s in p.generators() {
                    let (Some(w), Some(j)) = (ws.wall_of(i, s), ws.neighbor(i, s)) else {
                        continue;
                    };
                    if ids[w] == f && level[w].is_none() {
                        touched.push(w);
                        continue;
                    }
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            if touched.is_empty() {
                break;
            }
            for w in touched {
                level[w] = Some(current);
            }
            current += 1;
        }
    }
    level
}
