//! Poincaré-disk pictures of the right-angled `p`-gon tessellation.

use std::f64::consts::PI;
use std::fmt::Write as _;

use racg::error::Error;
use racg::group::{CoxeterPresentation, Gen};
use racg::walls::WallSet;
use serde::Serialize;

use crate::config::{RenderConfig, SceneColoring};
use crate::error::Result;
use crate::pipeline::{compute_walls, walls_csv, write_outputs, WallData};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm2().sqrt()
    }
}

/// A hyperbolic geodesic: a circle orthogonal to the unit circle, or a
/// diameter with unit normal `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Geodesic {
    Circle { center: Point, radius: f64 },
    Diameter { n: Point },
}

impl Geodesic {
    /// The geodesic through two distinct points of the open disk.
    pub fn through(u: Point, v: Point) -> Self {
        // c·u = (|u|² + 1)/2 and c·v = (|v|² + 1)/2
        let det = u.x * v.y - u.y * v.x;
        if det.abs() < 1e-12 {
            let d = v.sub(u);
            let len = d.norm2().sqrt();
            return Geodesic::Diameter {
                n: Point::new(-d.y / len, d.x / len),
            };
        }
        let a = (u.norm2() + 1.0) / 2.0;
        let b = (v.norm2() + 1.0) / 2.0;
        let center = Point::new((a * v.y - b * u.y) / det, (b * u.x - a * v.x) / det);
        Geodesic::Circle {
            center,
            radius: (center.norm2() - 1.0).sqrt(),
        }
    }

    /// Hyperbolic reflection: inversion in the circle, or Euclidean reflection
    /// in the diameter.
    pub fn reflect(&self, z: Point) -> Point {
        match *self {
            Geodesic::Circle { center, radius } => {
                let d = z.sub(center);
                let k = radius * radius / d.norm2();
                Point::new(center.x + k * d.x, center.y + k * d.y)
            }
            Geodesic::Diameter { n } => {
                let t = 2.0 * (z.x * n.x + z.y * n.y);
                Point::new(z.x - t * n.x, z.y - t * n.y)
            }
        }
    }
}

/// Hyperbolic circumradius `R` of the regular right-angled `p`-gon, from
/// `cosh R = cot(π/p)`.
pub fn circumradius(p: usize) -> f64 {
    (1.0 / (PI / p as f64).tan()).acosh()
}

/// Generators in cyclic order around the nerve, starting at the first
/// generator. Fails unless the nerve is a single cycle of length at least 5.
pub fn cycle_order(p: &CoxeterPresentation) -> Result<Vec<Gen>> {
    let n = p.rank();
    let unsupported = |why: &str| Error::Unsupported(format!("rendering needs a p-gon group: {why}"));
    if n < 5 {
        return Err(unsupported("fewer than 5 generators").into());
    }
    if p.generators().any(|g| p.link_mask(g).count_ones() != 2) {
        return Err(unsupported("nerve is not 2-regular").into());
    }
    let mut order = vec![Gen(0)];
    let mut prev = Gen(0);
    let mut cur = Gen(p.link_mask(Gen(0)).trailing_zeros() as u8);
    while cur != Gen(0) {
        order.push(cur);
        let next = p.link_mask(cur) & !prev.bit();
        prev = cur;
        cur = Gen(next.trailing_zeros() as u8);
    }
    if order.len() != n {
        return Err(unsupported("nerve is disconnected").into());
    }
    Ok(order)
}

#[derive(Clone, Debug, Serialize)]
pub struct SceneEdge {
    pub generator: String,
    /// Key of the wall carrying the edge.
    pub wall: String,
    pub color: u32,
    pub from: Point,
    pub to: Point,
    pub geodesic: Geodesic,
    /// Index of the chamber across the edge, when it is in the scene.
    pub across: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SceneChamber {
    pub element: String,
    pub length: usize,
    pub vertices: Vec<Point>,
    /// One edge per generator, in generator order.
    pub edges: Vec<SceneEdge>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskScene {
    pub p: usize,
    pub depth: usize,
    pub circumradius: f64,
    /// Euclidean radius of the base polygon's vertices, `tanh(R/2)`.
    pub disk_radius: f64,
    pub chambers: Vec<SceneChamber>,
}

/// Chamber copies of the base polygon for every element of `ball(depth)`,
/// with edges colored by `ids`. The wall set must have radius above `depth`.
pub fn build_scene(ws: &WallSet, ids: &[u32], depth: usize) -> Result<DiskScene> {
    let p = ws.presentation();
    if ws.radius() <= depth {
        return Err(Error::Precondition(format!(
            "a scene of depth {depth} needs walls of ball({})",
            depth + 1
        ))
        .into());
    }
    let order = cycle_order(p)?;
    let n = order.len();
    let r_h = circumradius(n);
    let rho = (r_h / 2.0).tanh();
    let base: Vec<Point> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64 - PI / 2.0 - PI / n as f64;
            Point::new(rho * t.cos(), rho * t.sin())
        })
        .collect();
    // edge of generator order[k] joins base[k] and base[k + 1]
    let mut slot = vec![0; n];
    for (k, g) in order.iter().enumerate() {
        slot[g.index()] = k;
    }
    let mirrors: Vec<Geodesic> = (0..n)
        .map(|g| {
            let k = slot[g];
            Geodesic::through(base[k], base[(k + 1) % n])
        })
        .collect();
    let count = ws.ball().prefix_len(depth);
    let chambers = ws.ball().elements()[..count]
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let vertices: Vec<Point> = base
                .iter()
                .map(|&v| g.letters().iter().rev().fold(v, |z, s| mirrors[s.index()].reflect(z)))
                .collect();
            let edges = p
                .generators()
                .map(|s| {
                    let k = slot[s.index()];
                    let (from, to) = (vertices[k], vertices[(k + 1) % n]);
                    let w = ws.wall_of(i, s).expect("face inside the wall set");
                    SceneEdge {
                        generator: p.name(s).to_string(),
                        wall: p.format(&ws.wall(w).reflection),
                        color: ids[w],
                        from,
                        to,
                        geodesic: Geodesic::through(from, to),
                        across: ws.neighbor(i, s).filter(|&j| j < count),
                    }
                })
                .collect();
            SceneChamber {
                element: p.format(g),
                length: g.len(),
                vertices,
                edges,
            }
        })
        .collect();
    Ok(DiskScene {
        p: n,
        depth,
        circumradius: r_h,
        disk_radius: rho,
        chambers,
    })
}

pub fn scene_from_walls(data: &WallData, depth: usize, coloring: SceneColoring) -> Result<DiskScene> {
    let ids = match coloring {
        SceneColoring::Phi => &data.phi.ids,
        SceneColoring::Psi => &data.psi.ids,
    };
    build_scene(&data.ws, ids, depth)
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn pt(z: Point) -> String {
    format!("{} {}", num(z.x), num(z.y))
}

/// SVG path segment from the current point `from` to `to` along `g`.
fn segment(from: Point, to: Point, g: &Geodesic) -> String {
    match *g {
        Geodesic::Diameter { .. } => format!("L {}", pt(to)),
        Geodesic::Circle { center, radius } => {
            let a = from.sub(center);
            let b = to.sub(center);
            let sweep = u8::from(a.x * b.y - a.y * b.x > 0.0);
            format!("A {r} {r} 0 0 {sweep} {}", pt(to), r = num(radius))
        }
    }
}

fn stroke(color: u32) -> String {
    // golden-angle hues keep nearby ids apart
    let hue = (color as f64 * 137.507_764) % 360.0;
    format!("hsl({hue:.1},70%,42%)")
}

/// The scene as an SVG document on the view box `[-1.05, 1.05]²`.
pub fn scene_svg(scene: &DiskScene) -> String {
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.050000 -1.050000 2.100000 2.100000\" width=\"800\" height=\"800\">\n",
    );
    let _ = writeln!(
        out,
        "<circle cx=\"0.000000\" cy=\"0.000000\" r=\"1.000000\" fill=\"#fafafa\" stroke=\"#222\" stroke-width=\"0.004000\"/>"
    );
    out.push_str("<g class=\"chambers\">\n");
    for c in &scene.chambers {
        let mut d = format!("M {}", pt(c.vertices[0]));
        let n = c.vertices.len();
        for k in 0..n {
            let (from, to) = (c.vertices[k], c.vertices[(k + 1) % n]);
            d.push(' ');
            d.push_str(&segment(from, to, &Geodesic::through(from, to)));
        }
        let fill = if c.length % 2 == 0 { "#e8edf4" } else { "#ffffff" };
        let _ = writeln!(
            out,
            "<path class=\"chamber\" data-element=\"{}\" d=\"{d} Z\" fill=\"{fill}\"/>",
            c.element
        );
    }
    out.push_str("</g>\n<g class=\"edges\" fill=\"none\" stroke-width=\"0.006000\">\n");
    for (i, c) in scene.chambers.iter().enumerate() {
        for e in &c.edges {
            if e.across.is_some_and(|j| j < i) {
                continue;
            }
            let _ = writeln!(
                out,
                "<path class=\"edge\" data-wall=\"{}\" data-color=\"{}\" d=\"M {} {}\" stroke=\"{}\"/>",
                e.wall,
                e.color,
                pt(e.from),
                segment(e.from, e.to, &e.geodesic),
                stroke(e.color)
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Renders the `p`-gon group to depth `depth`, with walls of `ball(depth + 1)`.
pub fn render_svg(
    p: &CoxeterPresentation,
    depth: usize,
    kappa: usize,
    distance_d: Option<usize>,
    coloring: SceneColoring,
) -> Result<String> {
    cycle_order(p)?;
    let data = compute_walls(p, depth + 1, kappa, distance_d)?;
    Ok(scene_svg(&scene_from_walls(&data, depth, coloring)?))
}

/// Writes `scene.svg` and the matching `walls.csv`.
pub fn run_render(config: &RenderConfig) -> Result<DiskScene> {
    let p = config.group.load()?;
    cycle_order(&p)?;
    if config.kappa == 0 {
        return Err(crate::error::CliError::Config("κ must be at least 1".into()));
    }
    let data = compute_walls(&p, config.depth + 1, config.kappa, config.distance_d)?;
    let scene = scene_from_walls(&data, config.depth, config.coloring)?;
    write_outputs(
        &config.out,
        &[("scene.svg", scene_svg(&scene)), ("walls.csv", walls_csv(&data)?)],
    )?;
    Ok(scene)
}
