//! Diary maps into rooted trees, the product map ψ, reconstruction of canonical
//! words from diaries, and distortion measurements.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Color, CoxeterPresentation, Gen, GroupElement};
use crate::morse_thue::decorate;
use crate::normal_form::{canonical_a_representation, canonical_of_word, ALetter, ARepresentation};

/// A vertex of the rooted tree of finite label sequences; the root is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeVertex<L> {
    labels: Vec<L>,
}

impl<L> TreeVertex<L> {
    pub fn root() -> Self {
        Self { labels: Vec::new() }
    }

    pub fn from_labels(labels: Vec<L>) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    /// Distance to the root.
    pub fn depth(&self) -> usize {
        self.labels.len()
    }

    pub fn is_root(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn map<M>(&self, f: impl FnMut(&L) -> M) -> TreeVertex<M> {
        TreeVertex {
            labels: self.labels.iter().map(f).collect(),
        }
    }
}

pub fn tree_distance<L: PartialEq>(u: &TreeVertex<L>, v: &TreeVertex<L>) -> usize {
    let common = u
        .labels
        .iter()
        .zip(&v.labels)
        .take_while(|(x, y)| x == y)
        .count();
    u.labels.len() + v.labels.len() - 2 * common
}

/// One tree vertex per color, with the ℓ¹ metric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProductPoint<L> {
    components: Vec<TreeVertex<L>>,
}

impl<L> ProductPoint<L> {
    pub fn new(components: Vec<TreeVertex<L>>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[TreeVertex<L>] {
        &self.components
    }

    /// Distance to the point whose components are all roots.
    pub fn norm(&self) -> usize {
        self.components.iter().map(TreeVertex::depth).sum()
    }
}

pub fn product_distance<L: PartialEq>(x: &ProductPoint<L>, y: &ProductPoint<L>) -> usize {
    x.components
        .iter()
        .zip(&y.components)
        .map(|(u, v)| tree_distance(u, v))
        .sum()
}

/// The last `κ` unrecorded letters before a base letter, oldest first; `None`
/// stands for ∅ and only occurs as left padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiaryEntry {
    slots: Vec<Option<ALetter>>,
}

impl DiaryEntry {
    pub fn new(slots: Vec<Option<ALetter>>) -> Self {
        Self { slots }
    }

    pub fn blank(kappa: usize) -> Self {
        Self {
            slots: vec![None; kappa],
        }
    }

    pub fn slots(&self) -> &[Option<ALetter>] {
        &self.slots
    }

    pub fn kappa(&self) -> usize {
        self.slots.len()
    }

    /// The recorded letters, without padding.
    pub fn letters(&self) -> Vec<ALetter> {
        self.slots.iter().flatten().copied().collect()
    }

    pub fn has_blank(&self) -> bool {
        self.slots.iter().any(Option::is_none)
    }

    pub fn is_blank(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    /// The most recent recorded letter.
    pub fn last(&self) -> Option<ALetter> {
        self.slots.last().copied().flatten()
    }

    fn is_well_formed(&self) -> bool {
        let first = self.slots.iter().position(Option::is_some).unwrap_or(self.slots.len());
        self.slots[first..].iter().all(Option::is_some)
    }
}

/// A diary entry together with the base letter it precedes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AugmentedLabel {
    pub entry: DiaryEntry,
    pub letter: Gen,
}

fn check_kappa(kappa: usize) -> Result<()> {
    if kappa == 0 {
        Err(Error::InvalidInput("κ must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Diary entries of a canonical representation.
///
/// Before each base letter, the last `κ` letters not yet recorded are popped
/// from the history and written down; the base letter itself joins the history
/// afterwards.
pub fn diary_entries(rep: &ARepresentation, kappa: usize) -> Vec<DiaryEntry> {
    let mut history: Vec<ALetter> = Vec::new();
    let mut out = Vec::with_capacity(rep.rank());
    for letter in rep.a_word() {
        if letter.is_base() {
            let take = kappa.min(history.len());
            let mut slots = vec![None; kappa - take];
            slots.extend(history.drain(history.len() - take..).map(Some));
            out.push(DiaryEntry { slots });
        }
        history.push(letter);
    }
    out
}

pub fn augmented_labels(rep: &ARepresentation, kappa: usize) -> Vec<AugmentedLabel> {
    diary_entries(rep, kappa)
        .into_iter()
        .zip(rep.base_letters())
        .map(|(entry, &letter)| AugmentedLabel { entry, letter })
        .collect()
}

pub fn diary_map(
    p: &CoxeterPresentation,
    g: &GroupElement,
    a: Color,
    kappa: usize,
) -> Result<TreeVertex<DiaryEntry>> {
    check_kappa(kappa)?;
    let rep = canonical_a_representation(p, g, a)?;
    Ok(TreeVertex::from_labels(diary_entries(&rep, kappa)))
}

pub fn augmented_diary(
    p: &CoxeterPresentation,
    g: &GroupElement,
    a: Color,
    kappa: usize,
) -> Result<TreeVertex<AugmentedLabel>> {
    check_kappa(kappa)?;
    let rep = canonical_a_representation(p, g, a)?;
    Ok(TreeVertex::from_labels(augmented_labels(&rep, kappa)))
}

/// The decorated augmented diary in color `a`.
pub fn psi_component(
    p: &CoxeterPresentation,
    g: &GroupElement,
    a: Color,
    kappa: usize,
) -> Result<TreeVertex<AugmentedLabel>> {
    check_kappa(kappa)?;
    let rep = decorate(p, &canonical_a_representation(p, g, a)?);
    Ok(TreeVertex::from_labels(augmented_labels(&rep, kappa)))
}

pub fn psi(
    p: &CoxeterPresentation,
    g: &GroupElement,
    kappa: usize,
) -> Result<ProductPoint<AugmentedLabel>> {
    p.colors()
        .map(|c| psi_component(p, g, c, kappa))
        .collect::<Result<_>>()
        .map(ProductPoint::new)
}

/// Plain undecorated diaries in every color.
pub fn undecorated_diaries(
    p: &CoxeterPresentation,
    g: &GroupElement,
    kappa: usize,
) -> Result<ProductPoint<DiaryEntry>> {
    p.colors()
        .map(|c| diary_map(p, g, c, kappa))
        .collect::<Result<_>>()
        .map(ProductPoint::new)
}

/// Reconstructed `W_j a_j`, either completely or as a suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    Full(Vec<ALetter>),
    Partial(Vec<ALetter>),
}

impl Reconstruction {
    pub fn letters(&self) -> &[ALetter] {
        match self {
            Reconstruction::Full(w) | Reconstruction::Partial(w) => w,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Reconstruction::Full(_))
    }
}

/// Position of a diary window `α_j … α_{j+r}` inside the full diary.
#[derive(Clone, Copy, Debug)]
pub struct CutContext {
    /// One-based index `j` of the first entry.
    pub first: usize,
    pub kappa: usize,
    /// `ℓ_𝒜(W_{j+1} a_{j+1} … W_{j+r})`.
    pub inner_len: usize,
}

impl CutContext {
    /// `κ(r+1) − inner_len` for a window of `len = r + 1` entries.
    pub fn bound(&self, len: usize) -> i64 {
        (self.kappa * len) as i64 - self.inner_len as i64
    }
}

/// `ℓ_𝒜(W_{j+1} a_{j+1} … W_{j+r})` read off a representation, `j` one-based.
pub fn window_inner_len(rep: &ARepresentation, first: usize, r: usize) -> usize {
    (first + 1..=first + r)
        .map(|i| rep.coefficient(i - 1).len())
        .sum::<usize>()
        + r.saturating_sub(1)
}

/// Recovers the coefficients `W_i` for every entry of the window, working
/// backwards from the most recent entry.
///
/// The letters popped into `α_i` are a suffix of the history before `a_i`.
/// Whatever lies after the last base letter of that suffix is `W_i`; what lies
/// before it, followed by the letters of `α_{i-1}`, is a suffix of the history
/// before `a_{i-1}`. A blank slot means the history was exhausted.
fn backward_coefficients(window: &[AugmentedLabel], first: usize) -> Result<Vec<Reconstruction>> {
    if window.is_empty() {
        return Err(Error::InvalidInput("empty diary window".into()));
    }
    if first == 0 {
        return Err(Error::InvalidInput("entries are numbered from 1".into()));
    }
    if let Some(bad) = window.iter().position(|l| !l.entry.is_well_formed()) {
        return Err(Error::Reconstruction(format!(
            "entry {} has a blank after a letter",
            first + bad
        )));
    }
    let mut out = vec![Reconstruction::Partial(Vec::new()); window.len()];
    let last = window.len() - 1;
    let mut known = window[last].entry.letters();
    let mut complete = window[last].entry.has_blank();
    for idx in (0..=last).rev() {
        let i = first + idx;
        let before = match known.iter().rposition(ALetter::is_base) {
            Some(pos) => {
                if idx > 0 && known[pos] != ALetter::Base(window[idx - 1].letter) {
                    return Err(Error::Reconstruction(format!(
                        "entry {i} disagrees with the base letter of entry {}",
                        i - 1
                    )));
                }
                out[idx] = Reconstruction::Full(known[pos + 1..].to_vec());
                Some(known[..pos].to_vec())
            }
            None if complete => {
                if i != 1 {
                    return Err(Error::Reconstruction(format!(
                        "history before entry {i} is exhausted without a base letter"
                    )));
                }
                out[idx] = Reconstruction::Full(known.clone());
                Some(Vec::new())
            }
            None => {
                out[idx] = Reconstruction::Partial(known.clone());
                None
            }
        };
        if idx > 0 {
            let prev = &window[idx - 1].entry;
            complete = (complete && before.is_some()) || prev.has_blank();
            known = before.unwrap_or_default();
            known.extend(prev.letters());
        }
    }
    Ok(out)
}

/// Reconstructs `W_j a_j` from the augmented entries `α_j … α_{j+r}`.
pub fn reconstruct_cut(window: &[AugmentedLabel], ctx: &CutContext) -> Result<Reconstruction> {
    let k = ctx.bound(window.len());
    if k < 1 {
        return Err(Error::Precondition(format!(
            "window bound κ(r+1) − ℓ = {k} is below 1"
        )));
    }
    if window.iter().any(|l| l.entry.kappa() != ctx.kappa) {
        return Err(Error::InvalidInput("entry width differs from κ".into()));
    }
    let coeffs = backward_coefficients(window, ctx.first)?;
    let a = ALetter::Base(window[0].letter);
    Ok(match &coeffs[0] {
        Reconstruction::Full(w) => Reconstruction::Full(w.iter().copied().chain([a]).collect()),
        Reconstruction::Partial(w) => {
            Reconstruction::Partial(w.iter().copied().chain([a]).collect())
        }
    })
}

/// Reconstructs the whole cut `W_1 a_1 … W_q` from `α_1 … α_q` when every
/// coefficient is determined, which is the case when `α_q` has a blank slot.
pub fn reconstruct_prefix(labels: &[AugmentedLabel]) -> Result<Option<Vec<ALetter>>> {
    let coeffs = backward_coefficients(labels, 1)?;
    let mut out = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let Reconstruction::Full(w) = c else {
            return Ok(None);
        };
        out.extend_from_slice(w);
        if i + 1 < labels.len() {
            out.push(ALetter::Base(labels[i].letter));
        }
    }
    Ok(Some(out))
}

/// Assigns dense integer ids to labels.
#[derive(Clone, Debug, Default)]
pub struct LabelInterner<L> {
    ids: HashMap<L, u32>,
}

impl<L: Clone + Eq + Hash> LabelInterner<L> {
    pub fn new() -> Self {
        Self {
            ids: HashMap::new(),
        }
    }

    pub fn intern(&mut self, label: &L) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.ids.len() as u32;
        self.ids.insert(label.clone(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    pub d: usize,
    pub d_t: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionReport {
    pub radius: usize,
    pub kappa: usize,
    pub seed: u64,
    pub elements: usize,
    pub exhaustive: bool,
    pub pairs: u64,
    pub injective: bool,
    /// Largest `d / d_T` over pairs with `d_T > 0`.
    pub max_ratio: f64,
    /// Pairs with `d_T > d`.
    pub lipschitz_violations: u64,
    /// Pairs with `|ψ| ≠ ℓ`.
    pub radial_violations: u64,
    pub histogram: Vec<HistogramRow>,
    /// Smallest image distance seen for each group distance.
    pub min_image_distance: Vec<(usize, usize)>,
}

impl DistortionReport {
    /// `d,d_T,count` rows.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("d,d_T,count\n");
        for row in &self.histogram {
            out.push_str(&format!("{},{},{}\n", row.d, row.d_t, row.count));
        }
        out
    }
}

/// ψ on every element of a slice, with labels interned per color.
pub fn interned_psi(
    p: &CoxeterPresentation,
    elements: &[GroupElement],
    kappa: usize,
) -> Result<Vec<Vec<Vec<u32>>>> {
    check_kappa(kappa)?;
    let points: Vec<ProductPoint<AugmentedLabel>> = elements
        .par_iter()
        .map(|g| psi(p, g, kappa))
        .collect::<Result<_>>()?;
    let mut interners: Vec<LabelInterner<AugmentedLabel>> =
        (0..p.num_colors()).map(|_| LabelInterner::new()).collect();
    Ok(points
        .iter()
        .map(|pt| {
            pt.components()
                .iter()
                .zip(interners.iter_mut())
                .map(|(v, int)| v.labels().iter().map(|l| int.intern(l)).collect())
                .collect()
        })
        .collect())
}

fn interned_distance(x: &[Vec<u32>], y: &[Vec<u32>]) -> usize {
    x.iter()
        .zip(y)
        .map(|(u, v)| {
            let common = u.iter().zip(v).take_while(|(a, b)| a == b).count();
            u.len() + v.len() - 2 * common
        })
        .sum()
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    lipschitz: u64,
    max_ratio: f64,
    hist: BTreeMap<(usize, usize), u64>,
}

impl Tally {
    fn add(mut self, d: usize, dt: usize) -> Self {
        self.pairs += 1;
        if dt > d {
            self.lipschitz += 1;
        }
        if dt > 0 {
            self.max_ratio = self.max_ratio.max(d as f64 / dt as f64);
        }
        *self.hist.entry((d, dt)).or_insert(0) += 1;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.pairs += other.pairs;
        self.lipschitz += other.lipschitz;
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        for (key, n) in other.hist {
            *self.hist.entry(key).or_insert(0) += n;
        }
        self
    }
}

/// Compares group distance with image distance under ψ on `ball(radius)`.
///
/// With `sample_size == 0`, or at least the number of pairs, every pair is
/// evaluated; otherwise `sample_size` pairs are drawn from a ChaCha stream
/// seeded with `seed`.
pub fn distortion_report(
    p: &CoxeterPresentation,
    radius: usize,
    kappa: usize,
    sample_size: u64,
    seed: u64,
) -> Result<DistortionReport> {
    let ball = p.ball(radius)?;
    let elements = ball.elements();
    let pts = interned_psi(p, elements, kappa)?;
    let n = elements.len();
    let injective = pts.iter().collect::<HashSet<_>>().len() == n;
    let radial_violations = elements
        .iter()
        .zip(&pts)
        .filter(|(g, pt)| pt.iter().map(Vec::len).sum::<usize>() != g.len())
        .count() as u64;
    let total = (n as u64) * (n as u64 - 1) / 2;
    let exhaustive = sample_size == 0 || sample_size >= total;
    let eval = |i: usize, j: usize| (p.distance(&elements[i], &elements[j]), interned_distance(&pts[i], &pts[j]));
    let tally = if exhaustive {
        (0..n)
            .into_par_iter()
            .fold(Tally::default, |t, i| {
                (i + 1..n).fold(t, |t, j| {
                    let (d, dt) = eval(i, j);
                    t.add(d, dt)
                })
            })
            .reduce(Tally::default, Tally::merge)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..sample_size)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (i, j)
            })
            .collect();
        pairs
            .par_iter()
            .fold(Tally::default, |t, &(i, j)| {
                let (d, dt) = eval(i, j);
                t.add(d, dt)
            })
            .reduce(Tally::default, Tally::merge)
    };
    let mut min_image: BTreeMap<usize, usize> = BTreeMap::new();
    for &(d, dt) in tally.hist.keys() {
        let slot = min_image.entry(d).or_insert(dt);
        *slot = (*slot).min(dt);
    }
    Ok(DistortionReport {
        radius,
        kappa,
        seed,
        elements: n,
        exhaustive,
        pairs: tally.pairs,
        injective,
        max_ratio: tally.max_ratio,
        lipschitz_violations: tally.lipschitz,
        radial_violations,
        histogram: tally
            .hist
            .iter()
            .map(|(&(d, d_t), &count)| HistogramRow { d, d_t, count })
            .collect(),
        min_image_distance: min_image.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicReport {
    /// `d(B̄^k Ā, B̄^{k+1} Ā)`.
    pub d: usize,
    pub undecorated_diary_distance: usize,
    pub decorated_psi_distance: usize,
    pub b_length: usize,
}

/// Compares `γ = B̄^k Ā` with `γ̄ = B̄^{k+1} Ā` under the plain diaries and
/// under ψ.
pub fn periodic_counterexample(
    p: &CoxeterPresentation,
    b_bar: &[Gen],
    a_bar: &[Gen],
    k: usize,
    kappa: usize,
) -> Result<PeriodicReport> {
    check_kappa(kappa)?;
    let (Some(&first), Some(&last)) = (b_bar.first(), b_bar.last()) else {
        return Err(Error::Precondition("B̄ is empty".into()));
    };
    if first == last {
        return Err(Error::Precondition("B̄ must start and end with different letters".into()));
    }
    let b = p.color(first);
    if b_bar.iter().any(|&g| p.color(g) != b) || !p.is_reduced(b_bar) {
        return Err(Error::Precondition("B̄ must be a reduced word in one color".into()));
    }
    let Some(&a0) = a_bar.first() else {
        return Err(Error::Precondition("Ā is empty".into()));
    };
    let a = p.color(a0);
    if a == b || a_bar.iter().any(|&g| p.color(g) != a) || !p.is_reduced(a_bar) {
        return Err(Error::Precondition(
            "Ā must be a reduced word in a single color other than B̄'s".into(),
        ));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let build = |reps: usize| {
        let mut w: Vec<Gen> = Vec::new();
        for _ in 0..reps {
            w.extend_from_slice(b_bar);
        }
        w.extend_from_slice(a_bar);
        w
    };
    let (w1, w2) = (build(k), build(k + 1));
    if !p.is_reduced(&w1) || !p.is_reduced(&w2) {
        return Err(Error::Precondition("B̄^k Ā is not reduced".into()));
    }
    let g1 = p.reduce(&w1);
    let g2 = p.reduce(&w2);
    let plain1 = undecorated_diaries(p, &g1, kappa)?;
    let plain2 = undecorated_diaries(p, &g2, kappa)?;
    let psi1 = psi(p, &g1, kappa)?;
    let psi2 = psi(p, &g2, kappa)?;
    debug_assert_eq!(canonical_of_word(p, &w1, a)?.flatten().len(), w1.len());
    Ok(PeriodicReport {
        d: p.distance(&g1, &g2),
        undecorated_diary_distance: product_distance(&plain1, &plain2),
        decorated_psi_distance: product_distance(&psi1, &psi2),
        b_length: b_bar.len(),
    })
}
