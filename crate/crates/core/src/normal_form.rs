//! Canonical a-representations: every letter of the base color is moved as far
//! left as the commutation relation allows, and the words between consecutive
//! base letters are written in right simplex presentation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{gens_of_mask, Color, CoxeterPresentation, Gen, GroupElement};

/// A clique of pairwise commuting generators, optionally carrying one
/// Morse–Thue bit per vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simplex {
    pub vertices: u64,
    pub decoration: u64,
}

impl Simplex {
    pub fn from_mask(vertices: u64) -> Self {
        Self {
            vertices,
            decoration: 0,
        }
    }

    pub fn singleton(g: Gen) -> Self {
        Self::from_mask(g.bit())
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> {
        gens_of_mask(self.vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.vertices & g.bit() != 0
    }

    pub fn bit(&self, g: Gen) -> u8 {
        (self.decoration & g.bit() != 0) as u8
    }

    pub fn undecorated(&self) -> Self {
        Self::from_mask(self.vertices)
    }

    pub fn vertex_of_color(&self, p: &CoxeterPresentation, c: Color) -> Option<Gen> {
        self.gens().find(|&g| p.color(g) == c)
    }
}

/// A letter of the alphabet 𝒜: a base-color generator or a simplex avoiding the
/// base color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ALetter {
    Base(Gen),
    Simplex(Simplex),
}

impl ALetter {
    pub fn gens(&self) -> Vec<Gen> {
        match self {
            ALetter::Base(g) => vec![*g],
            ALetter::Simplex(s) => s.gens().collect(),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, ALetter::Base(_))
    }

    pub fn undecorated(&self) -> Self {
        match self {
            ALetter::Base(g) => ALetter::Base(*g),
            ALetter::Simplex(s) => ALetter::Simplex(s.undecorated()),
        }
    }

    pub fn display<'a>(&'a self, p: &'a CoxeterPresentation) -> ALetterDisplay<'a> {
        ALetterDisplay { p, letter: self }
    }
}

pub struct ALetterDisplay<'a> {
    p: &'a CoxeterPresentation,
    letter: &'a ALetter,
}

impl fmt::Display for ALetterDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.letter {
            ALetter::Base(g) => write!(f, "{}", self.p.name(*g)),
            ALetter::Simplex(s) => {
                write!(f, "[")?;
                for (i, g) in s.gens().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", self.p.name(g))?;
                    if s.decoration != 0 || f.alternate() {
                        write!(f, "^{}", s.bit(g))?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// `W_1 a_1 W_2 a_2 … W_r a_r W_{r+1}` with each `W_i` a sequence of simplices
/// `Δ_q … Δ_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ARepresentation {
    base: Color,
    coefficients: Vec<Vec<Simplex>>,
    letters: Vec<Gen>,
    decorated: bool,
}

impl ARepresentation {
    pub fn empty(base: Color) -> Self {
        Self {
            base,
            coefficients: vec![Vec::new()],
            letters: Vec::new(),
            decorated: false,
        }
    }

    pub fn base(&self) -> Color {
        self.base
    }

    /// Number of base-color letters.
    pub fn rank(&self) -> usize {
        self.letters.len()
    }

    pub fn base_letters(&self) -> &[Gen] {
        &self.letters
    }

    /// `W_1 … W_{r+1}`, zero-based.
    pub fn coefficients(&self) -> &[Vec<Simplex>] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> &[Simplex] {
        &self.coefficients[i]
    }

    pub fn free_coefficient(&self) -> &[Simplex] {
        &self.coefficients[self.letters.len()]
    }

    pub fn is_decorated(&self) -> bool {
        self.decorated
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty() && self.coefficients.iter().all(Vec::is_empty)
    }

    /// The word over 𝒜.
    pub fn a_word(&self) -> Vec<ALetter> {
        let mut out = Vec::with_capacity(self.a_length());
        for (i, coeff) in self.coefficients.iter().enumerate() {
            out.extend(coeff.iter().map(|s| ALetter::Simplex(*s)));
            if let Some(&a) = self.letters.get(i) {
                out.push(ALetter::Base(a));
            }
        }
        out
    }

    /// Length as a word over 𝒜.
    pub fn a_length(&self) -> usize {
        self.letters.len() + self.coefficients.iter().map(Vec::len).sum::<usize>()
    }

    /// The underlying reduced word over the generators.
    pub fn flatten(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        for letter in self.a_word() {
            out.extend(letter.gens());
        }
        out
    }

    pub fn undecorated(&self) -> Self {
        Self {
            base: self.base,
            coefficients: self
                .coefficients
                .iter()
                .map(|c| c.iter().map(Simplex::undecorated).collect())
                .collect(),
            letters: self.letters.clone(),
            decorated: false,
        }
    }

    pub(crate) fn with_decorations(&self, decorations: &[Vec<u64>]) -> Self {
        let mut out = self.clone();
        for (coeff, decs) in out.coefficients.iter_mut().zip(decorations) {
            for (s, d) in coeff.iter_mut().zip(decs) {
                s.decoration = *d;
            }
        }
        out.decorated = true;
        out
    }

    pub fn display<'a>(&'a self, p: &'a CoxeterPresentation) -> ARepDisplay<'a> {
        ARepDisplay { p, rep: self }
    }
}

/// Pretty-printer using bracketed simplices, e.g. `[s2 s4] s1 [s6]`.
pub struct ARepDisplay<'a> {
    p: &'a CoxeterPresentation,
    rep: &'a ARepresentation,
}

impl fmt::Display for ARepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.rep.a_word();
        if word.is_empty() {
            return write!(f, "ε");
        }
        for (i, letter) in word.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if self.rep.decorated {
                write!(f, "{:#}", letter.display(self.p))?;
            } else {
                write!(f, "{}", letter.display(self.p))?;
            }
        }
        Ok(())
    }
}

/// A letter carrying the position it had in the input word.
#[derive(Clone, Copy, Debug)]
struct Tagged {
    gen: Gen,
    tag: usize,
}

/// Canonical form in which every letter still knows its input position.
struct TaggedRep {
    coefficients: Vec<Vec<Vec<Tagged>>>,
    letters: Vec<Tagged>,
}

impl TaggedRep {
    /// Flattened tags, with the output position of each base letter.
    fn flatten(&self) -> (Vec<usize>, Vec<usize>) {
        let mut tags = Vec::new();
        let mut base_positions = Vec::new();
        for (i, coeff) in self.coefficients.iter().enumerate() {
            for simplex in coeff {
                tags.extend(simplex.iter().map(|t| t.tag));
            }
            if let Some(a) = self.letters.get(i) {
                base_positions.push(tags.len());
                tags.push(a.tag);
            }
        }
        (tags, base_positions)
    }

    fn strip(&self, base: Color) -> ARepresentation {
        ARepresentation {
            base,
            coefficients: self
                .coefficients
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|s| Simplex::from_mask(s.iter().fold(0, |m, t| m | t.gen.bit())))
                        .collect()
                })
                .collect(),
            letters: self.letters.iter().map(|t| t.gen).collect(),
            decorated: false,
        }
    }
}

/// Splits a word into `Δ_q … Δ_1`, where the level of a letter is one more than
/// the highest level among later letters it does not commute with.
fn simplex_levels(p: &CoxeterPresentation, word: &[Tagged]) -> Vec<Vec<Tagged>> {
    let mut level_of = vec![0usize; word.len()];
    let mut best_by_gen = vec![0usize; p.rank()];
    let mut top = 0;
    for (idx, t) in word.iter().enumerate().rev() {
        let level = 1 + gens_of_mask(p.blocking_mask(t.gen))
            .map(|g| best_by_gen[g.index()])
            .max()
            .unwrap_or(0);
        level_of[idx] = level;
        let slot = &mut best_by_gen[t.gen.index()];
        *slot = (*slot).max(level);
        top = top.max(level);
    }
    let mut out = vec![Vec::new(); top];
    for (idx, t) in word.iter().enumerate() {
        out[top - level_of[idx]].push(*t);
    }
    for simplex in &mut out {
        simplex.sort_by_key(|t| t.gen);
    }
    out
}

/// Builds the canonical form of a reduced tagged word.
///
/// Each base letter takes as its coefficient the letters of the pending free
/// part that must stay to its left: those not commuting with it, closed under
/// earlier letters that do not commute with something already taken.
fn canonical_tagged(p: &CoxeterPresentation, word: &[Tagged], a: Color) -> TaggedRep {
    let mut raw: Vec<Vec<Tagged>> = Vec::new();
    let mut letters = Vec::new();
    let mut free: Vec<Tagged> = Vec::new();
    for &t in word {
        if p.color(t.gen) != a {
            free.push(t);
            continue;
        }
        let mut blockers = p.blocking_mask(t.gen);
        let mut taken = vec![false; free.len()];
        for (i, y) in free.iter().enumerate().rev() {
            if blockers & y.gen.bit() != 0 {
                taken[i] = true;
                blockers |= p.blocking_mask(y.gen);
            }
        }
        let (coeff, rest): (Vec<_>, Vec<_>) = free
            .iter()
            .zip(&taken)
            .partition(|(_, &is_taken)| is_taken);
        raw.push(coeff.into_iter().map(|(t, _)| *t).collect());
        free = rest.into_iter().map(|(t, _)| *t).collect();
        letters.push(t);
    }
    raw.push(free);
    TaggedRep {
        coefficients: raw.iter().map(|w| simplex_levels(p, w)).collect(),
        letters,
    }
}

fn tag_word(word: &[Gen]) -> Vec<Tagged> {
    word.iter()
        .enumerate()
        .map(|(tag, &gen)| Tagged { gen, tag })
        .collect()
}

pub fn right_simplex_presentation(p: &CoxeterPresentation, g: &GroupElement) -> Vec<Simplex> {
    simplex_levels(p, &tag_word(g.letters()))
        .iter()
        .map(|s| Simplex::from_mask(s.iter().fold(0, |m, t| m | t.gen.bit())))
        .collect()
}

pub fn canonical_a_representation(
    p: &CoxeterPresentation,
    g: &GroupElement,
    a: Color,
) -> Result<ARepresentation> {
    p.check_color(a)?;
    Ok(canonical_tagged(p, &tag_word(g.letters()), a).strip(a))
}

/// Canonical a-representation of a reduced word given in any spelling.
pub fn canonical_of_word(
    p: &CoxeterPresentation,
    word: &[Gen],
    a: Color,
) -> Result<ARepresentation> {
    p.check_color(a)?;
    if !p.is_reduced(word) {
        return Err(Error::InvalidInput("word is not reduced".into()));
    }
    Ok(canonical_tagged(p, &tag_word(word), a).strip(a))
}

/// Permutation of letter positions induced by passing to the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionMap {
    images: Vec<usize>,
}

impl ReductionMap {
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &j in &self.images {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    fn from_tags(tags: &[usize]) -> Self {
        let mut images = vec![0; tags.len()];
        for (pos, &tag) in tags.iter().enumerate() {
            images[tag] = pos;
        }
        Self { images }
    }
}

pub fn reduction_map(p: &CoxeterPresentation, word: &[Gen], a: Color) -> Result<ReductionMap> {
    p.check_color(a)?;
    if !p.is_reduced(word) {
        return Err(Error::InvalidInput("word is not reduced".into()));
    }
    let (tags, _) = canonical_tagged(p, &tag_word(word), a).flatten();
    Ok(ReductionMap::from_tags(&tags))
}

/// Clauses of the composition analysis. `TwoColor(i)` applies to 2-colored
/// groups, `MultiColor(i)` to groups with three or more colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    TwoColor(u8),
    MultiColor(u8),
}

impl Clause {
    /// Clauses whose validity requires the group to have no square.
    pub fn needs_hyperbolicity(self) -> bool {
        matches!(
            self,
            Clause::TwoColor(4) | Clause::MultiColor(2) | Clause::MultiColor(3)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseViolation {
    pub clause: Clause,
    pub detail: String,
}

/// Result of rewriting `UV` into canonical form. Positions index the
/// concatenated flat word `flatten(U) ++ flatten(V)`.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub w: ARepresentation,
    pub phi: ReductionMap,
    /// Positions of U-letters that end up right of `a_{p+1}`.
    pub u_right: Vec<usize>,
    /// Number of 𝒜-letters in the first coefficient of V.
    pub k: usize,
    pub violations: Vec<ClauseViolation>,
}

/// Flat positions of the simplices of coefficient `i`, relative to `offset`.
fn simplex_positions(rep: &ARepresentation, i: usize, offset: usize) -> Vec<Vec<usize>> {
    let mut pos = offset;
    for (j, coeff) in rep.coefficients.iter().enumerate() {
        if j == i {
            return coeff
                .iter()
                .map(|s| {
                    let range: Vec<usize> = (pos..pos + s.len()).collect();
                    pos += s.len();
                    range
                })
                .collect();
        }
        pos += coeff.iter().map(Simplex::len).sum::<usize>() + 1;
    }
    Vec::new()
}

pub fn analyze_composition(
    p: &CoxeterPresentation,
    u: &ARepresentation,
    v: &ARepresentation,
) -> Result<CompositionReport> {
    if u.base != v.base {
        return Err(Error::Precondition("U and V have different base colors".into()));
    }
    let a = u.base;
    let uf = u.flatten();
    let vf = v.flatten();
    let nu = uf.len();
    let mut joined = uf.clone();
    joined.extend_from_slice(&vf);
    if !p.is_reduced(&joined) {
        return Err(Error::Precondition("UV is not reduced".into()));
    }
    let tagged = canonical_tagged(p, &tag_word(&joined), a);
    let (tags, base_pos) = tagged.flatten();
    let phi = ReductionMap::from_tags(&tags);
    let w = tagged.strip(a);
    let pp = u.rank();
    let a_next = base_pos.get(pp).copied();
    let a_after = base_pos.get(pp + 1).copied();
    let u_right: Vec<usize> = match a_next {
        Some(pos) => (0..nu).filter(|&t| phi.apply(t) > pos).collect(),
        None => Vec::new(),
    };
    let k = v.coefficients[0].len();
    let mut violations = Vec::new();
    let mut fail = |clause: Clause, detail: String| violations.push(ClauseViolation { clause, detail });

    let w_coeff = &tagged.coefficients[pp];
    let u_free = simplex_positions(u, u.rank(), 0);
    let u_free_len: usize = u_free.iter().map(Vec::len).sum();
    let last_u_simplex: Vec<usize> = u_free.last().cloned().unwrap_or_default();
    let v_first = simplex_positions(v, 0, nu);

    if p.num_colors() <= 2 {
        let coeff_tags: Vec<usize> = w_coeff.iter().flatten().map(|t| t.tag).collect();
        let v_tags: Vec<usize> = v_first.iter().flatten().copied().collect();
        if coeff_tags.len() < v_tags.len() || coeff_tags[coeff_tags.len() - v_tags.len()..] != v_tags[..] {
            fail(
                Clause::TwoColor(1),
                format!("coefficient of a_(p+1) has tags {coeff_tags:?}, expected suffix {v_tags:?}"),
            );
        }
        if k >= 1 && (!u_right.is_empty() || w.flatten() != joined) {
            fail(
                Clause::TwoColor(2),
                format!("k = {k} but {} U-letters moved or W differs from UV", u_right.len()),
            );
        }
        if !u_right.is_empty() {
            let expected: Vec<usize> = (nu - u_right.len()..nu).collect();
            if u_right.len() > u_free_len || u_right != expected {
                fail(
                    Clause::TwoColor(3),
                    format!("moved U-letters {u_right:?} are not the tail {expected:?} of U's free coefficient"),
                );
            }
        }
        if let Some(pos) = a_after {
            let beyond = u_right.iter().filter(|&&t| phi.apply(t) > pos).count();
            if beyond > 1 {
                fail(
                    Clause::TwoColor(4),
                    format!("{beyond} U-letters land right of a_(p+2)"),
                );
            }
        }
    } else {
        let q = w_coeff.len();
        for (j, v_simplex) in v_first.iter().rev().enumerate() {
            let ok = j < q && {
                let w_simplex = &w_coeff[q - 1 - j];
                v_simplex
                    .iter()
                    .all(|&t| w_simplex.iter().any(|x| x.tag == t))
            };
            if !ok {
                fail(
                    Clause::MultiColor(1),
                    format!("simplex Δ_{} of V is not contained in Δ_{} of W_(p+1)", j + 1, j + 1),
                );
            }
        }
        if let Some(pos) = a_after {
            for &t in &u_right {
                if phi.apply(t) > pos && !last_u_simplex.contains(&t) {
                    fail(
                        Clause::MultiColor(2),
                        format!("U-letter at {t} lands right of a_(p+2) but is not in Δ_1 of U"),
                    );
                }
            }
        }
        if k >= 1 && u_right.iter().any(|t| !last_u_simplex.contains(t)) {
            fail(
                Clause::MultiColor(3),
                format!("V_(p+1) nonempty and moved U-letters {u_right:?} leave Δ_1 of U"),
            );
        }
    }
    Ok(CompositionReport {
        w,
        phi,
        u_right,
        k,
        violations,
    })
}

/// Outcome of comparing `W_{p+1} a_{p+1}` for two elements past their median
/// with the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixDifference {
    pub median: GroupElement,
    /// `ℓ_a` of the median.
    pub p: usize,
    /// Both canonical forms have an `a_{p+1}`.
    pub qualifying: bool,
    pub differs: bool,
    pub left: (Vec<Simplex>, Option<Gen>),
    pub right: (Vec<Simplex>, Option<Gen>),
}

pub fn check_prefix_difference(
    p: &CoxeterPresentation,
    g: &GroupElement,
    h: &GroupElement,
    a: Color,
) -> Result<PrefixDifference> {
    if g == h {
        return Err(Error::Precondition("the two elements coincide".into()));
    }
    let median = p.median(&GroupElement::identity(), g, h);
    let pp = p.color_length(&median, a)?;
    let w = canonical_a_representation(p, g, a)?;
    let wb = canonical_a_representation(p, h, a)?;
    let slice = |r: &ARepresentation| {
        (
            r.coefficients.get(pp).cloned().unwrap_or_default(),
            r.letters.get(pp).copied(),
        )
    };
    let left = slice(&w);
    let right = slice(&wb);
    Ok(PrefixDifference {
        qualifying: w.rank() > pp && wb.rank() > pp,
        differs: left != right,
        median,
        p: pp,
        left,
        right,
    })
}

/// A letter of the b-projection of a decorated representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StarLetter {
    Base(Gen),
    Decorated { gen: Gen, bit: u8 },
    Star,
}

/// Replaces each simplex by its b-colored vertex with its decoration, or by ⋆
/// when it has none.
pub fn star_projection(
    p: &CoxeterPresentation,
    w: &ARepresentation,
    b: Color,
) -> Result<Vec<StarLetter>> {
    p.check_color(b)?;
    if b == w.base {
        return Err(Error::Precondition("projection color equals the base color".into()));
    }
    Ok(w.a_word()
        .into_iter()
        .map(|letter| match letter {
            ALetter::Base(g) => StarLetter::Base(g),
            ALetter::Simplex(s) => match s.vertex_of_color(p, b) {
                Some(gen) => StarLetter::Decorated { gen, bit: s.bit(gen) },
                None => StarLetter::Star,
            },
        })
        .collect())
}
