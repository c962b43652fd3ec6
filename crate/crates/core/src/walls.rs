//! Walls of the chamber system modeled on the Cayley graph: each wall is the
//! class of edges flipped by one reflection `γ s γ⁻¹`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{psi_component, AugmentedLabel};
use crate::error::{Error, Result};
use crate::group::{gens_of_mask, Ball, Color, CoxeterPresentation, Gen, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Wall {
    /// Normal form of the reflection; the wall's key.
    pub reflection: GroupElement,
    pub generator: Gen,
    pub s_color: Color,
    /// The unique shortest chamber adjacent to the wall.
    pub witness: GroupElement,
}

/// Strips right descents lying in `{s} ∪ link(s)`, leaving the shortest
/// element of `g·Z(s)`.
pub fn minimal_witness(p: &CoxeterPresentation, g: &GroupElement, s: Gen) -> GroupElement {
    let centralizer = p.link_mask(s) | s.bit();
    let mut w = g.clone();
    loop {
        let d = p.right_descents(&w) & centralizer;
        match gens_of_mask(d).next() {
            Some(t) => w = p.right_multiply(&w, t),
            None => return w,
        }
    }
}

pub fn wall_of_edge(p: &CoxeterPresentation, g: &GroupElement, s: Gen) -> Wall {
    Wall {
        reflection: p.conjugate(g, s),
        generator: s,
        s_color: p.color(s),
        witness: minimal_witness(p, g, s),
    }
}

/// Left of a wall is the side containing the identity chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

pub fn side_of_wall(p: &CoxeterPresentation, g: &GroupElement, wall: &Wall) -> Side {
    if p.multiply(&wall.reflection, g).len() > g.len() {
        Side::Left
    } else {
        Side::Right
    }
}

/// Every wall with an edge inside a ball, with the edge-to-wall incidence.
#[derive(Clone, Debug)]
pub struct WallSet {
    p: CoxeterPresentation,
    ball: Ball,
    neighbors: Vec<Option<usize>>,
    walls: Vec<Wall>,
    index: HashMap<GroupElement, usize>,
    edge_wall: Vec<Option<usize>>,
    vertices: Vec<Vec<usize>>,
}

impl WallSet {
    pub fn new(p: &CoxeterPresentation, radius: usize) -> Result<Self> {
        Self::from_ball(p, p.ball(radius)?)
    }

    pub fn from_ball(p: &CoxeterPresentation, ball: Ball) -> Result<Self> {
        let rank = p.rank();
        let neighbors = ball.neighbor_table(p);
        let edges: Vec<(usize, Gen)> = (0..ball.len())
            .flat_map(|i| p.generators().map(move |s| (i, s)))
            .filter(|&(i, s)| {
                neighbors[i * rank + s.index()].is_some_and(|j| ball.get(j).len() > ball.get(i).len())
            })
            .collect();
        let keys: Vec<GroupElement> = edges
            .par_iter()
            .map(|&(i, s)| p.conjugate(ball.get(i), s))
            .collect();
        let mut first_edge: HashMap<&GroupElement, (usize, Gen)> = HashMap::new();
        for (key, &edge) in keys.iter().zip(&edges) {
            first_edge.entry(key).or_insert(edge);
        }
        let mut sorted: Vec<(&GroupElement, (usize, Gen))> = first_edge.into_iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(b.0));
        let walls: Vec<Wall> = sorted
            .par_iter()
            .map(|(key, (i, s))| Wall {
                reflection: (*key).clone(),
                generator: *s,
                s_color: p.color(*s),
                witness: minimal_witness(p, ball.get(*i), *s),
            })
            .collect();
        let index: HashMap<GroupElement, usize> = walls
            .iter()
            .enumerate()
            .map(|(i, w)| (w.reflection.clone(), i))
            .collect();
        let mut edge_wall = vec![None; ball.len() * rank];
        let mut vertices = vec![Vec::new(); walls.len()];
        for (key, &(i, s)) in keys.iter().zip(&edges) {
            let w = index[key];
            let j = neighbors[i * rank + s.index()].expect("edge inside ball");
            edge_wall[i * rank + s.index()] = Some(w);
            edge_wall[j * rank + s.index()] = Some(w);
            vertices[w].push(i);
            vertices[w].push(j);
        }
        for v in &mut vertices {
            v.sort_unstable();
            v.dedup();
        }
        Ok(Self {
            p: p.clone(),
            ball,
            neighbors,
            walls,
            index,
            edge_wall,
            vertices,
        })
    }

    pub fn presentation(&self) -> &CoxeterPresentation {
        &self.p
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn wall(&self, i: usize) -> &Wall {
        &self.walls[i]
    }

    pub fn index_of(&self, reflection: &GroupElement) -> Option<usize> {
        self.index.get(reflection).copied()
    }

    /// Ball index of `ball[i]·s`, if inside.
    pub fn neighbor(&self, i: usize, s: Gen) -> Option<usize> {
        self.neighbors[i * self.p.rank() + s.index()]
    }

    /// Wall of the edge `(ball[i], ball[i]·s)`, if that edge lies in the ball.
    pub fn wall_of(&self, i: usize, s: Gen) -> Option<usize> {
        self.edge_wall[i * self.p.rank() + s.index()]
    }

    pub fn wall_of_element(&self, g: &GroupElement, s: Gen) -> Option<usize> {
        self.ball.index_of(g).and_then(|i| self.wall_of(i, s))
    }

    /// Ball indices of chambers adjacent to wall `w` inside the ball.
    pub fn vertices(&self, w: usize) -> &[usize] {
        &self.vertices[w]
    }

    /// Edges `(lower endpoint, generator)` of wall `w` inside the ball.
    pub fn edges(&self, w: usize) -> Vec<(usize, Gen)> {
        let s = self.walls[w].generator;
        let mut out: Vec<(usize, Gen)> = self.vertices[w]
            .iter()
            .filter_map(|&i| {
                let j = self.neighbor(i, s)?;
                (self.ball.get(j).len() > self.ball.get(i).len()).then_some((i, s))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Walls crossed by the normal-form path from the identity to `ball[i]`.
    pub fn crossed_walls(&self, i: usize) -> Vec<usize> {
        let g = self.ball.get(i);
        let mut cur = GroupElement::identity();
        let mut out = Vec::with_capacity(g.len());
        for &t in g.letters() {
            let ci = self.ball.index_of(&cur).expect("prefix inside ball");
            out.push(self.wall_of(ci, t).expect("prefix edge inside ball"));
            cur = self.p.right_multiply(&cur, t);
        }
        out
    }

    pub fn reflections_commute(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.walls[a].reflection, &self.walls[b].reflection);
        self.p.multiply(ra, rb) == self.p.multiply(rb, ra)
    }
}

pub fn walls_in_ball(p: &CoxeterPresentation, radius: usize) -> Result<Vec<Wall>> {
    Ok(WallSet::new(p, radius)?.walls)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IntersectionWitness {
    /// The two walls bound the same chamber along commuting faces.
    SharedCorner { chamber: GroupElement },
    CommutingReflections,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointViolation {
    pub first: GroupElement,
    pub second: GroupElement,
    pub witness: IntersectionWitness,
}

/// Looks for intersecting walls of equal S-color in `ball(radius)`, both at
/// chamber corners and through commuting reflections.
pub fn same_scolor_disjoint_check(
    p: &CoxeterPresentation,
    radius: usize,
) -> Result<Vec<DisjointViolation>> {
    let ws = WallSet::new(p, radius)?;
    Ok(disjointness_violations(&ws))
}

pub fn disjointness_violations(ws: &WallSet) -> Vec<DisjointViolation> {
    let p = &ws.p;
    let mut out = Vec::new();
    for (i, g) in ws.ball.elements().iter().enumerate() {
        for s in p.generators() {
            for t in gens_of_mask(p.link_mask(s)) {
                if t <= s || p.color(s) != p.color(t) {
                    continue;
                }
                if let (Some(a), Some(b)) = (ws.wall_of(i, s), ws.wall_of(i, t)) {
                    out.push(DisjointViolation {
                        first: ws.walls[a].reflection.clone(),
                        second: ws.walls[b].reflection.clone(),
                        witness: IntersectionWitness::SharedCorner { chamber: g.clone() },
                    });
                }
            }
        }
    }
    let mut by_color: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
    for (i, w) in ws.walls.iter().enumerate() {
        by_color.entry(w.s_color).or_default().push(i);
    }
    for class in by_color.values() {
        let found: Vec<DisjointViolation> = class
            .par_iter()
            .enumerate()
            .flat_map_iter(|(k, &a)| {
                class[k + 1..]
                    .iter()
                    .filter(move |&&b| ws.reflections_commute(a, b))
                    .map(move |&b| DisjointViolation {
                        first: ws.walls[a].reflection.clone(),
                        second: ws.walls[b].reflection.clone(),
                        witness: IntersectionWitness::CommutingReflections,
                    })
            })
            .collect();
        out.extend(found);
    }
    out
}

/// The Φ color of a wall: its S-color and the final augmented, decorated
/// diary label of `witness·s` in that color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PhiColor {
    pub s_color: Color,
    pub label: AugmentedLabel,
}

/// Φ read from an arbitrary edge `(g, g·s)` of the wall.
pub fn phi_color_of_edge(
    p: &CoxeterPresentation,
    g: &GroupElement,
    s: Gen,
    kappa: usize,
) -> Result<PhiColor> {
    let lower = if p.right_multiply(g, s).len() > g.len() {
        g.clone()
    } else {
        p.right_multiply(g, s)
    };
    let upper = p.right_multiply(&lower, s);
    let c = p.color(s);
    let tree = psi_component(p, &upper, c, kappa)?;
    let label = tree
        .labels()
        .last()
        .cloned()
        .ok_or_else(|| Error::InvalidInput("edge has no letter of its own color".into()))?;
    Ok(PhiColor { s_color: c, label })
}

pub fn phi_color(p: &CoxeterPresentation, wall: &Wall, kappa: usize) -> Result<PhiColor> {
    phi_color_of_edge(p, &wall.witness, wall.generator, kappa)
}

/// Φ on a wall set, with colors numbered by first appearance in key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallColoring {
    pub ids: Vec<u32>,
    pub palette: Vec<PhiColor>,
}

impl WallColoring {
    pub fn color(&self, wall: usize) -> &PhiColor {
        &self.palette[self.ids[wall] as usize]
    }
}

pub fn phi_coloring(ws: &WallSet, kappa: usize) -> Result<WallColoring> {
    let colors: Vec<PhiColor> = ws
        .walls
        .par_iter()
        .map(|w| phi_color(&ws.p, w, kappa))
        .collect::<Result<_>>()?;
    let mut lookup: HashMap<PhiColor, u32> = HashMap::new();
    let mut palette = Vec::new();
    let ids = colors
        .into_iter()
        .map(|c| {
            *lookup.entry(c.clone()).or_insert_with(|| {
                palette.push(c);
                palette.len() as u32 - 1
            })
        })
        .collect();
    Ok(WallColoring { ids, palette })
}

/// `1 + min d(u, v)` over chambers `u`, `v` adjacent to the two walls inside
/// the ball.
pub fn wall_distance(ws: &WallSet, a: usize, b: usize) -> Result<usize> {
    if a == b {
        return Err(Error::Precondition("wall distance of a wall to itself".into()));
    }
    if ws.walls[a].s_color != ws.walls[b].s_color {
        return Err(Error::Precondition("walls have different S-colors".into()));
    }
    let p = &ws.p;
    let best = ws.vertices[a]
        .iter()
        .flat_map(|&u| ws.vertices[b].iter().map(move |&v| (u, v)))
        .map(|(u, v)| p.distance(ws.ball.get(u), ws.ball.get(v)))
        .min()
        .ok_or_else(|| Error::Precondition("wall has no chamber in the ball".into()))?;
    Ok(best + 1)
}

/// Same-S-color walls at distance below `d`, found by breadth-first search in
/// the whole group from the chambers of `w` up to depth `d − 2`.
pub fn conflicts(ws: &WallSet, w: usize, d: usize) -> Vec<usize> {
    if d < 2 {
        return Vec::new();
    }
    let p = &ws.p;
    let color_gens = p.color_mask(ws.walls[w].s_color);
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut queue = VecDeque::new();
    for &i in &ws.vertices[w] {
        let g = ws.ball.get(i).clone();
        seen.insert(g.clone());
        queue.push_back((g, 0usize));
    }
    let mut out = HashSet::new();
    while let Some((g, depth)) = queue.pop_front() {
        if let Some(i) = ws.ball.index_of(&g) {
            for t in gens_of_mask(color_gens) {
                if let Some(other) = ws.wall_of(i, t) {
                    if other != w {
                        out.insert(other);
                    }
                }
            }
        }
        if depth + 2 < d {
            for s in p.generators() {
                let h = p.right_multiply(&g, s);
                if seen.insert(h.clone()) {
                    queue.push_back((h, depth + 1));
                }
            }
        }
    }
    let mut out: Vec<usize> = out.into_iter().collect();
    out.sort_unstable();
    out
}

/// Greedy coloring of the conflict graph in key order: each wall takes the
/// smallest value unused by earlier conflicting walls.
pub fn distance_decoration(ws: &WallSet, d: usize) -> Vec<u32> {
    let lists: Vec<Vec<usize>> = (0..ws.len())
        .into_par_iter()
        .map(|w| conflicts(ws, w, d))
        .collect();
    let mut dec = vec![u32::MAX; ws.len()];
    for w in 0..ws.len() {
        let taken: HashSet<u32> = lists[w]
            .iter()
            .filter(|&&o| o < w)
            .map(|&o| dec[o])
            .collect();
        dec[w] = (0..).find(|c| !taken.contains(c)).expect("unbounded range");
    }
    dec
}

/// Ψ: Φ combined with a distance decoration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedWallColoring {
    pub distance: usize,
    pub phi: Vec<u32>,
    pub decoration: Vec<u32>,
    /// Dense id of `(Φ id, decoration)` per wall.
    pub ids: Vec<u32>,
    pub palette: Vec<(u32, u32)>,
}

pub fn psi_coloring(ws: &WallSet, phi: &WallColoring, d: usize) -> DecoratedWallColoring {
    let decoration = distance_decoration(ws, d);
    let mut lookup: HashMap<(u32, u32), u32> = HashMap::new();
    let mut palette = Vec::new();
    let ids = phi
        .ids
        .iter()
        .zip(&decoration)
        .map(|(&f, &g)| {
            *lookup.entry((f, g)).or_insert_with(|| {
                palette.push((f, g));
                palette.len() as u32 - 1
            })
        })
        .collect();
    DecoratedWallColoring {
        distance: d,
        phi: phi.ids.clone(),
        decoration,
        ids,
        palette,
    }
}

/// Largest distance from a point of one side of a geodesic triangle `(1, x, y)`
/// to the union of the other two sides, over all `x, y` in `ball(radius)`.
/// Sides are the normal-form paths.
pub fn thin_triangle_constant(p: &CoxeterPresentation, radius: usize) -> Result<usize> {
    let ball = p.ball(radius)?;
    let elems = ball.elements();
    let e = GroupElement::identity();
    Ok((0..elems.len())
        .into_par_iter()
        .map(|i| {
            let x = &elems[i];
            let side_x = p.geodesic(&e, x);
            (i + 1..elems.len())
                .map(|j| {
                    let y = &elems[j];
                    let sides = [side_x.clone(), p.geodesic(&e, y), p.geodesic(x, y)];
                    (0..3)
                        .map(|k| {
                            sides[k]
                                .iter()
                                .map(|q| {
                                    (0..3)
                                        .filter(|&m| m != k)
                                        .flat_map(|m| sides[m].iter())
                                        .map(|r| p.distance(q, r))
                                        .min()
                                        .unwrap_or(0)
                                })
                                .max()
                                .unwrap_or(0)
                        })
                        .max()
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0))
}

/// A face `(chamber, generator)` between `chamber` and `chamber·generator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Face {
    pub chamber: GroupElement,
    pub generator: Gen,
}

/// Faces `F_k, …, F_0`, ending at a face of the identity chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gallery {
    pub faces: Vec<Face>,
    /// Steps whose descent was not offered by the color and was taken from
    /// the link of the face's generator instead.
    pub fallback_steps: usize,
}

impl Gallery {
    /// Chambers from the identity outwards.
    pub fn chambers(&self) -> Vec<GroupElement> {
        self.faces.iter().rev().map(|f| f.chamber.clone()).collect()
    }
}

/// Walks from a face towards the identity chamber, reading from the face's Φ
/// color the simplex of letters just before its base letter and stepping down
/// along one of them.
///
/// The color is a function of the wall, so it describes the wall's shortest
/// chamber. When the current chamber lies further along the wall, or the color
/// is blank although the chamber is not the identity, the step is taken along
/// a descent commuting with the face's generator.
pub fn gallery_reconstruct(ws: &WallSet, phi: &WallColoring, face: &Face) -> Result<Gallery> {
    let p = &ws.p;
    let (mut c, mut a) = {
        let other = p.right_multiply(&face.chamber, face.generator);
        if other.len() > face.chamber.len() {
            (face.chamber.clone(), face.generator)
        } else {
            (other, face.generator)
        }
    };
    let mut faces = Vec::new();
    let mut fallback_steps = 0;
    loop {
        let wall = ws.wall_of_element(&c, a).ok_or_else(|| {
            Error::Reconstruction(format!("face ({}, {}) is outside the ball", p.format(&c), p.name(a)))
        })?;
        faces.push(Face {
            chamber: c.clone(),
            generator: a,
        });
        if c.is_identity() {
            break;
        }
        let color = phi.color(wall);
        if color.label.letter != a {
            return Err(Error::Reconstruction("color does not match the face's generator".into()));
        }
        let offered = color.label.entry.last().map_or(0, |l| {
            l.gens().iter().fold(0u64, |m, g| m | g.bit())
        });
        let descents = p.right_descents(&c);
        let s = match gens_of_mask(offered & descents).next() {
            Some(s) => s,
            None => {
                fallback_steps += 1;
                gens_of_mask(descents & p.link_mask(a)).next().ok_or_else(|| {
                    Error::Reconstruction(format!(
                        "no descent available at chamber {}",
                        p.format(&c)
                    ))
                })?
            }
        };
        c = p.right_multiply(&c, s);
        a = s;
    }
    Ok(Gallery {
        faces,
        fallback_steps,
    })
}

/// Level of each wall: one more than the number of walls of the same color
/// separating it from the identity chamber.
///
/// A wall of the same color separates `M` from the identity exactly when it
/// crosses the normal-form path to the shortest chamber of `M`; such walls are
/// disjoint from `M` unless the coloring is improper, which is reported.
pub fn wall_levels(ws: &WallSet, ids: &[u32]) -> Result<Vec<usize>> {
    (0..ws.len())
        .into_par_iter()
        .map(|m| {
            let w = ws
                .ball
                .index_of(&ws.walls[m].witness)
                .ok_or_else(|| Error::Precondition("witness outside the ball".into()))?;
            let mut level = 1;
            for other in ws.crossed_walls(w) {
                if ids[other] != ids[m] {
                    continue;
                }
                if ws.reflections_commute(other, m) {
                    return Err(Error::Precondition(format!(
                        "walls {} and {} share a color and intersect",
                        ws.p.format(&ws.walls[other].reflection),
                        ws.p.format(&ws.walls[m].reflection)
                    )));
                }
                level += 1;
            }
            Ok(level)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A sign per wall. A chamber on the identity side of a wall sees the wall's
/// sign on that face, a chamber on the other side sees its opposite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub signs: Vec<Sign>,
}

/// Signs alternate with level, starting from `start(color)` at level 1.
pub fn alternating_orientation(
    levels: &[usize],
    ids: &[u32],
    start: impl Fn(u32) -> Sign,
) -> Orientation {
    Orientation {
        signs: levels
            .iter()
            .zip(ids)
            .map(|(&level, &c)| {
                let s = start(c);
                if level % 2 == 1 {
                    s
                } else {
                    s.flip()
                }
            })
            .collect(),
    }
}

/// Every face whose wall does not separate its chamber from the identity is +.
pub fn unbalanced_orientation(ws: &WallSet) -> Orientation {
    Orientation {
        signs: vec![Sign::Plus; ws.len()],
    }
}

/// Sign seen by chamber `ball[i]` on its face `s`.
pub fn face_sign(ws: &WallSet, orientation: &Orientation, i: usize, s: Gen) -> Option<Sign> {
    let w = ws.wall_of(i, s)?;
    let j = ws.neighbor(i, s)?;
    let toward_identity = ws.ball.get(j).len() < ws.ball.get(i).len();
    Some(if toward_identity {
        orientation.signs[w].flip()
    } else {
        orientation.signs[w]
    })
}

/// One chamber's faces as `(color id, sign)`, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tile {
    pub faces: Vec<(u32, Sign)>,
}

impl Tile {
    /// Faces as a sorted multiset.
    pub fn multiset(&self) -> Vec<(u32, Sign)> {
        let mut m = self.faces.clone();
        m.sort_unstable();
        m
    }
}

/// The tiles of every chamber of `ball(radius)`, where the walls come from a
/// wall set of radius at least `radius + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub radius: usize,
    pub chambers: Vec<GroupElement>,
    pub tiles: Vec<Tile>,
}

impl Resolution {
    /// Distinct tile multisets with their multiplicities.
    pub fn tile_types(&self) -> BTreeMap<Vec<(u32, Sign)>, usize> {
        let mut out = BTreeMap::new();
        for t in &self.tiles {
            *out.entry(t.multiset()).or_insert(0) += 1;
        }
        out
    }
}

pub fn opposite(face: (u32, Sign)) -> (u32, Sign) {
    (face.0, face.1.flip())
}

pub fn resolve_tiles(
    ws: &WallSet,
    ids: &[u32],
    orientation: &Orientation,
    radius: usize,
) -> Result<Resolution> {
    if ws.radius() <= radius {
        return Err(Error::Precondition(format!(
            "tiles of ball({radius}) need walls of ball({})",
            radius + 1
        )));
    }
    let n = ws.ball.prefix_len(radius);
    let p = &ws.p;
    let tiles = (0..n)
        .map(|i| Tile {
            faces: p
                .generators()
                .map(|s| {
                    let w = ws.wall_of(i, s).expect("face inside ball");
                    let sign = face_sign(ws, orientation, i, s).expect("face inside ball");
                    (ids[w], sign)
                })
                .collect(),
        })
        .collect();
    Ok(Resolution {
        radius,
        chambers: ws.ball.elements()[..n].to_vec(),
        tiles,
    })
}

/// Integer weights on the + faces; the − faces carry the negatives.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightFunction {
    plus: BTreeMap<u32, i64>,
}

impl WeightFunction {
    pub fn new(plus: BTreeMap<u32, i64>) -> Self {
        Self { plus }
    }

    pub fn constant(colors: impl IntoIterator<Item = u32>, value: i64) -> Self {
        Self {
            plus: colors.into_iter().map(|c| (c, value)).collect(),
        }
    }

    pub fn get(&self, face: (u32, Sign)) -> Result<i64> {
        self.plus
            .get(&face.0)
            .map(|v| v * face.1.value())
            .ok_or(Error::UnknownColor(face.0 as usize))
    }

    pub fn is_trivial(&self) -> bool {
        self.plus.values().all(|&v| v == 0)
    }

    pub fn negated(&self) -> Self {
        Self {
            plus: self.plus.iter().map(|(&c, &v)| (c, -v)).collect(),
        }
    }
}

pub fn chamber_weight(tile: &Tile, w: &WeightFunction) -> Result<i64> {
    tile.faces.iter().map(|&f| w.get(f)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceResult {
    pub positive: Option<GroupElement>,
    pub negative: Option<GroupElement>,
}

impl BalanceResult {
    pub fn both_found(&self) -> bool {
        self.positive.is_some() && self.negative.is_some()
    }
}

/// First chambers, in shortlex order, of strictly positive and strictly
/// negative weight.
pub fn balance_search(res: &Resolution, w: &WeightFunction) -> Result<BalanceResult> {
    if w.is_trivial() {
        return Err(Error::Precondition("weight function is identically zero".into()));
    }
    let mut out = BalanceResult {
        positive: None,
        negative: None,
    };
    for (g, t) in res.chambers.iter().zip(&res.tiles) {
        let x = chamber_weight(t, w)?;
        if x > 0 && out.positive.is_none() {
            out.positive = Some(g.clone());
        }
        if x < 0 && out.negative.is_none() {
            out.negative = Some(g.clone());
        }
        if out.both_found() {
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnbalancedCheck {
    pub unbalanced: bool,
    /// No tiles were examined, so the verdict is vacuous.
    pub degenerate: bool,
}

pub fn check_unbalanced(res: &Resolution, w: &WeightFunction) -> Result<UnbalancedCheck> {
    for t in &res.tiles {
        if chamber_weight(t, w)? <= 0 {
            return Ok(UnbalancedCheck {
                unbalanced: false,
                degenerate: false,
            });
        }
    }
    Ok(UnbalancedCheck {
        unbalanced: true,
        degenerate: res.tiles.is_empty(),
    })
}

/// Whether left translation by `g` preserves the coloring on every wall with
/// an edge with both ends in `ball(radius − ℓ(g))`.
pub fn translation_preserves(ws: &WallSet, ids: &[u32], g: &GroupElement) -> bool {
    let p = &ws.p;
    let Some(inner) = ws.radius().checked_sub(g.len()) else {
        return false;
    };
    let inner_len = ws.ball.prefix_len(inner);
    (0..ws.len()).all(|m| {
        let inside = |&&(u, s): &&(usize, Gen)| ws.neighbor(u, s).is_some_and(|j| j < inner_len);
        let Some(&(u, s)) = ws.edges(m).iter().find(inside) else {
            return true;
        };
        let moved = p.multiply(g, ws.ball.get(u));
        match ws.wall_of_element(&moved, s) {
            Some(gm) => ids[gm] == ids[m],
            None => false,
        }
    })
}

/// Elements of `ball(radius)` whose translation preserves the coloring.
pub fn coloring_symmetries(ws: &WallSet, ids: &[u32], radius: usize) -> Vec<GroupElement> {
    let n = ws.ball.prefix_len(radius);
    ws.ball.elements()[..n]
        .par_iter()
        .filter(|g| translation_preserves(ws, ids, g))
        .cloned()
        .collect()
}
