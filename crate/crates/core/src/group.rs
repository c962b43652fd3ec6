//! Right-angled Coxeter groups: presentations, shortlex normal forms, metric
//! operations and Cayley balls.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nerve::Nerve;

/// Generators are stored as bits of a `u64`, which caps the rank.
pub const MAX_GENERATORS: usize = 64;

/// Default element budget for [`CoxeterPresentation::ball`].
pub const DEFAULT_BALL_BUDGET: usize = 5_000_000;

/// Index of a generator in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gen(pub u8);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// Zero-based color index. Group files and reports number colors from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Color(pub u8);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// One-based number as used in group files.
    pub fn number(self) -> usize {
        self.0 as usize + 1
    }
}

/// Iterates the generators whose bits are set in `mask`, in increasing order.
pub fn gens_of_mask(mask: u64) -> impl Iterator<Item = Gen> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let g = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            Some(Gen(g))
        }
    })
}

/// Generators strictly after `g` in declaration order.
pub fn mask_above(g: Gen) -> u64 {
    if g.0 >= 63 {
        0
    } else {
        !((1u64 << (g.0 + 1)) - 1)
    }
}

/// On-disk group description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub generators: Vec<String>,
    pub commuting_pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, usize>>,
}

/// Generators, commutation relation and a proper vertex coloring of the nerve.
#[derive(Clone, Debug)]
pub struct CoxeterPresentation {
    names: Vec<String>,
    commute: Vec<u64>,
    coloring: Vec<Color>,
    num_colors: usize,
    lookup: HashMap<String, Gen>,
}

impl CoxeterPresentation {
    /// Builds a presentation from generator names, commuting index pairs and an
    /// optional one-based coloring. Without a coloring a minimum one is computed.
    pub fn new(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        coloring: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidInput("no generators".into()));
        }
        if n > MAX_GENERATORS {
            return Err(Error::InvalidInput(format!(
                "{n} generators, at most {MAX_GENERATORS} supported"
            )));
        }
        let mut lookup = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("bad generator name {name:?}")));
            }
            if lookup.insert(name.clone(), Gen(i as u8)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate generator `{name}`")));
            }
        }
        let mut commute = vec![0u64; n];
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("pair ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidInput(format!(
                    "generator `{}` paired with itself",
                    names[i]
                )));
            }
            commute[i] |= 1 << j;
            commute[j] |= 1 << i;
        }
        let colors: Vec<usize> = match coloring {
            Some(c) => {
                if c.len() != n {
                    return Err(Error::InvalidInput("coloring must cover every generator".into()));
                }
                if c.iter().any(|&x| x == 0) {
                    return Err(Error::InvalidInput("colors are numbered from 1".into()));
                }
                c.into_iter().map(|x| x - 1).collect()
            }
            None => Nerve::from_adjacency(commute.clone()).chromatic_coloring().colors,
        };
        let num_colors = colors.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; num_colors];
        for &c in &colors {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::InvalidInput(format!("color {} is unused", missing + 1)));
        }
        if num_colors > u8::MAX as usize {
            return Err(Error::InvalidInput("too many colors".into()));
        }
        for i in 0..n {
            for j in gens_of_mask(commute[i]) {
                if colors[i] == colors[j.index()] {
                    return Err(Error::InvalidInput(format!(
                        "commuting generators `{}` and `{}` share color {}",
                        names[i],
                        names[j.index()],
                        colors[i] + 1
                    )));
                }
            }
        }
        Ok(Self {
            names,
            commute,
            coloring: colors.into_iter().map(|c| Color(c as u8)).collect(),
            num_colors,
            lookup,
        })
    }

    /// The right-angled `p`-gon group: generators `s1..sp`, where `s_i`
    /// commutes with its two cyclic neighbours.
    pub fn polygon(p: usize) -> Result<Self> {
        if p < 4 {
            return Err(Error::InvalidInput(format!("polygon needs p >= 4, got {p}")));
        }
        let names = (1..=p).map(|i| format!("s{i}")).collect();
        let pairs: Vec<_> = (0..p).map(|i| (i, (i + 1) % p)).collect();
        Self::new(names, &pairs, None)
    }

    pub fn from_file(file: &GroupFile) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, name) in file.generators.iter().enumerate() {
            index.entry(name.as_str()).or_insert(i);
        }
        let resolve = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let mut pairs = Vec::with_capacity(file.commuting_pairs.len());
        for (a, b) in &file.commuting_pairs {
            pairs.push((resolve(a)?, resolve(b)?));
        }
        let coloring = match &file.coloring {
            None => None,
            Some(map) => {
                for name in map.keys() {
                    resolve(name)?;
                }
                let mut colors = Vec::with_capacity(file.generators.len());
                for name in &file.generators {
                    let c = map.get(name).ok_or_else(|| {
                        Error::InvalidInput(format!("generator `{name}` has no color"))
                    })?;
                    colors.push(*c);
                }
                Some(colors)
            }
        };
        Self::new(file.generators.clone(), &pairs, coloring)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> GroupFile {
        let mut pairs = Vec::new();
        for i in 0..self.rank() {
            for j in gens_of_mask(self.commute[i]) {
                if j.index() > i {
                    pairs.push((self.names[i].clone(), self.names[j.index()].clone()));
                }
            }
        }
        GroupFile {
            generators: self.names.clone(),
            commuting_pairs: pairs,
            coloring: Some(
                self.names
                    .iter()
                    .zip(&self.coloring)
                    .map(|(n, c)| (n.clone(), c.number()))
                    .collect(),
            ),
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> {
        (0..self.rank() as u8).map(Gen)
    }

    pub fn all_mask(&self) -> u64 {
        if self.rank() == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank()) - 1
        }
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, name: &str) -> Result<Gen> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn commutes(&self, a: Gen, b: Gen) -> bool {
        self.commute[a.index()] & b.bit() != 0
    }

    /// Generators commuting with `g`, excluding `g` itself.
    pub fn link_mask(&self, g: Gen) -> u64 {
        self.commute[g.index()]
    }

    /// Generators that do not commute with `g`, including `g` itself.
    pub fn blocking_mask(&self, g: Gen) -> u64 {
        !self.commute[g.index()] & self.all_mask()
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.commute
    }

    pub fn color(&self, g: Gen) -> Color {
        self.coloring[g.index()]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.num_colors as u8).map(Color)
    }

    pub fn color_mask(&self, c: Color) -> u64 {
        self.generators()
            .filter(|&g| self.color(g) == c)
            .fold(0, |m, g| m | g.bit())
    }

    pub fn check_color(&self, c: Color) -> Result<()> {
        if c.index() < self.num_colors {
            Ok(())
        } else {
            Err(Error::UnknownColor(c.number()))
        }
    }

    /// Parses whitespace- or comma-separated generator names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Gen>> {
        text.split(|c: char| c.is_whitespace() || c == ',' || c == '·')
            .filter(|t| !t.is_empty())
            .map(|t| self.generator(t))
            .collect()
    }

    pub fn element(&self, text: &str) -> Result<GroupElement> {
        Ok(self.reduce(&self.parse_word(text)?))
    }

    pub fn format_word(&self, word: &[Gen]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = word.iter().map(|&g| self.name(g)).collect();
        parts.join(" ")
    }

    pub fn format(&self, g: &GroupElement) -> String {
        self.format_word(g.letters())
    }

    /// Multiplies a normal form on the right by `x` in place.
    ///
    /// Scans left past letters commuting with `x`; a matching letter cancels,
    /// otherwise `x` is inserted at the first position after the blocking
    /// letter where it precedes its successor.
    pub fn push(&self, word: &mut Vec<Gen>, x: Gen) {
        let link = self.commute[x.index()];
        let mut i = word.len();
        while i > 0 && link & word[i - 1].bit() != 0 {
            i -= 1;
        }
        if i > 0 && word[i - 1] == x {
            word.remove(i - 1);
            return;
        }
        let mut j = i;
        while j < word.len() && word[j] < x {
            j += 1;
        }
        word.insert(j, x);
    }

    pub fn reduce(&self, word: &[Gen]) -> GroupElement {
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            self.push(&mut out, x);
        }
        GroupElement { letters: out }
    }

    pub fn is_reduced(&self, word: &[Gen]) -> bool {
        self.reduce(word).len() == word.len()
    }

    pub fn right_multiply(&self, g: &GroupElement, x: Gen) -> GroupElement {
        let mut w = g.letters.clone();
        self.push(&mut w, x);
        GroupElement { letters: w }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut w = a.letters.clone();
        for &x in &b.letters {
            self.push(&mut w, x);
        }
        GroupElement { letters: w }
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        let rev: Vec<Gen> = a.letters.iter().rev().copied().collect();
        self.reduce(&rev)
    }

    /// Normal form of `a⁻¹ b`.
    pub fn quotient(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut w = Vec::with_capacity(a.len() + b.len());
        for &x in a.letters.iter().rev() {
            self.push(&mut w, x);
        }
        for &x in &b.letters {
            self.push(&mut w, x);
        }
        GroupElement { letters: w }
    }

    pub fn conjugate(&self, g: &GroupElement, x: Gen) -> GroupElement {
        let mut w = g.letters.clone();
        self.push(&mut w, x);
        for &y in g.letters.iter().rev() {
            self.push(&mut w, y);
        }
        GroupElement { letters: w }
    }

    pub fn color_length(&self, a: &GroupElement, c: Color) -> Result<usize> {
        self.check_color(c)?;
        Ok(a.letters.iter().filter(|&&g| self.color(g) == c).count())
    }

    pub fn color_lengths(&self, a: &GroupElement) -> Vec<usize> {
        let mut out = vec![0; self.num_colors];
        for &g in &a.letters {
            out[self.color(g).index()] += 1;
        }
        out
    }

    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> usize {
        self.quotient(a, b).len()
    }

    /// Generators `s` with `ℓ(g s) < ℓ(g)`, as a mask.
    pub fn right_descents(&self, g: &GroupElement) -> u64 {
        let mut later_blockers = 0u64;
        let mut out = 0u64;
        for &x in g.letters.iter().rev() {
            if later_blockers & x.bit() == 0 {
                out |= x.bit();
            }
            later_blockers |= self.blocking_mask(x);
        }
        out
    }

    /// The vertices of the normal-form path from `a` to `b`.
    pub fn geodesic(&self, a: &GroupElement, b: &GroupElement) -> Vec<GroupElement> {
        let steps = self.quotient(a, b);
        let mut out = Vec::with_capacity(steps.len() + 1);
        let mut cur = a.letters.clone();
        out.push(a.clone());
        for &x in &steps.letters {
            self.push(&mut cur, x);
            out.push(GroupElement {
                letters: cur.clone(),
            });
        }
        out
    }

    /// The tripod centre of three elements.
    ///
    /// Works in coordinates centred at `a`: walks the normal-form path from
    /// `b` to `c` and swaps steps at local maxima of the distance to `a` until
    /// the distance profile is a valley; its bottom is the median.
    pub fn median(&self, a: &GroupElement, b: &GroupElement, c: &GroupElement) -> GroupElement {
        let x = self.quotient(a, b);
        let mut steps = self.quotient(b, c).letters;
        let k = steps.len();
        let mut points = Vec::with_capacity(k + 1);
        let mut cur = x.letters.clone();
        points.push(cur.clone());
        for &s in &steps {
            self.push(&mut cur, s);
            points.push(cur.clone());
        }
        loop {
            let peak = (1..k).find(|&i| {
                points[i].len() > points[i - 1].len() && points[i].len() > points[i + 1].len()
            });
            let Some(i) = peak else { break };
            debug_assert!(self.commutes(steps[i - 1], steps[i]));
            steps.swap(i - 1, i);
            let mut w = points[i - 1].clone();
            self.push(&mut w, steps[i - 1]);
            points[i] = w;
        }
        let bottom = (0..=k).min_by_key(|&i| points[i].len()).unwrap_or(0);
        let centred = GroupElement {
            letters: points[bottom].clone(),
        };
        self.multiply(a, &centred)
    }

    pub fn ball(&self, radius: usize) -> Result<Ball> {
        self.ball_with_budget(radius, DEFAULT_BALL_BUDGET)
    }

    /// Breadth-first enumeration of all elements of length at most `radius`,
    /// each sphere in shortlex order.
    pub fn ball_with_budget(&self, radius: usize, budget: usize) -> Result<Ball> {
        let mut elements = vec![GroupElement::identity()];
        let mut offsets = vec![0, 1];
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        for k in 0..radius {
            let (lo, hi) = (offsets[k], offsets[k + 1]);
            let mut next = Vec::new();
            for idx in lo..hi {
                for x in self.generators() {
                    let mut w = elements[idx].letters.clone();
                    self.push(&mut w, x);
                    if w.len() == k + 1 && seen.insert(w.clone()) {
                        next.push(GroupElement { letters: w });
                    }
                }
            }
            if elements.len() + next.len() > budget {
                return Err(Error::Budget(format!(
                    "ball of radius {radius} exceeds {budget} elements"
                )));
            }
            next.sort();
            elements.extend(next);
            offsets.push(elements.len());
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(Ball {
            radius,
            elements,
            offsets,
            index,
        })
    }
}

/// A group element stored as its shortlex normal form.
///
/// Ordering is shortlex: length first, then lexicographic in generator order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    letters: Vec<Gen>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "#{}", g.0)?;
        }
        Ok(())
    }
}

/// All elements of length at most `radius`, ordered shortlex.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    elements: Vec<GroupElement>,
    offsets: Vec<usize>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn sphere(&self, k: usize) -> &[GroupElement] {
        if k > self.radius {
            return &[];
        }
        &self.elements[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Number of elements of length at most `k`.
    pub fn prefix_len(&self, k: usize) -> usize {
        self.offsets[k.min(self.radius) + 1]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// `table[i * rank + s]` is the index of `elements[i]·s` when it lies in the ball.
    pub fn neighbor_table(&self, p: &CoxeterPresentation) -> Vec<Option<usize>> {
        let rank = p.rank();
        let mut out = Vec::with_capacity(self.len() * rank);
        for g in &self.elements {
            for s in p.generators() {
                out.push(self.index_of(&p.right_multiply(g, s)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> CoxeterPresentation {
        CoxeterPresentation::polygon(6).unwrap()
    }

    #[test]
    fn square_of_generator_is_trivial() {
        let p = hexagon();
        assert!(p.element("s1 s1").unwrap().is_identity());
    }

    #[test]
    fn commuting_letters_cancel() {
        let p = hexagon();
        assert_eq!(p.element("s1 s2 s1").unwrap(), p.element("s2").unwrap());
    }

    #[test]
    fn normal_form_is_shortlex() {
        let p = hexagon();
        assert_eq!(p.format(&p.element("s2 s1").unwrap()), "s1 s2");
        assert_eq!(p.format(&p.element("s4 s1").unwrap()), "s4 s1");
        assert_eq!(p.format(&p.element("s4 s2 s3").unwrap()), "s3 s4 s2");
    }

    #[test]
    fn inverse_and_identity() {
        let p = hexagon();
        let g = p.element("s1 s3 s5 s2").unwrap();
        assert_eq!(p.multiply(&GroupElement::identity(), &g), g);
        assert!(p.multiply(&g, &p.invert(&g)).is_identity());
        assert_eq!(p.invert(&p.element("s1 s4").unwrap()), p.element("s4 s1").unwrap());
    }

    #[test]
    fn lengths() {
        let p = hexagon();
        let g = p.element("s1 s4").unwrap();
        assert_eq!(p.color_length(&g, p.color(Gen(0))).unwrap(), 1);
        assert!(p.color_length(&g, Color(7)).is_err());
        assert_eq!(p.distance(&p.element("s1").unwrap(), &p.element("s3").unwrap()), 2);
    }

    #[test]
    fn descents() {
        let p = hexagon();
        let g = p.element("s3 s1 s2").unwrap();
        let d = p.right_descents(&g);
        assert_eq!(d, Gen(0).bit() | Gen(1).bit());
    }

    #[test]
    fn median_examples() {
        let p = hexagon();
        let e = GroupElement::identity();
        let s1 = p.element("s1").unwrap();
        let s3 = p.element("s3").unwrap();
        let s13 = p.element("s1 s3").unwrap();
        assert_eq!(p.median(&e, &s1, &s3), e);
        assert_eq!(p.median(&e, &s13, &s1), s1);
        assert_eq!(p.median(&s1, &s1, &s13), s1);
    }

    #[test]
    fn ball_spheres() {
        let p = hexagon();
        let b = p.ball(3).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 6, 24, 90]);
        assert!(p.ball_with_budget(5, 100).is_err());
    }

    #[test]
    fn parse_rejects_bad_files() {
        assert!(matches!(
            CoxeterPresentation::from_json(r#"{"generators": ["a", "a"], "commuting_pairs": []}"#),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            CoxeterPresentation::from_json(
                r#"{"generators": ["a", "b"], "commuting_pairs": [["a", "a"]]}"#
            ),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            CoxeterPresentation::from_json(
                r#"{"generators": ["a", "b"], "commuting_pairs": [["a", "b"]], "coloring": {"a": 1, "b": 1}}"#
            ),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            CoxeterPresentation::from_json(r#"{"generators": ["a", "b"], "commuting_pairs": [["a", "c"]]}"#),
            Err(Error::UnknownGenerator(_))
        ));
        match CoxeterPresentation::from_json("{\n  \"generators\": [\"a\",\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        let p = hexagon();
        let text = serde_json::to_string(&p.to_file()).unwrap();
        let q = CoxeterPresentation::from_json(&text).unwrap();
        assert_eq!(q.adjacency(), p.adjacency());
        assert_eq!(q.num_colors(), 2);
    }
}
