use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use racg::embedding::{distortion_report, psi, AugmentedLabel, DistortionReport};
use racg::group::{CoxeterPresentation, GroupElement, GroupFile};
use racg::nerve::{analyze, NerveAnalysis};
use racg::walls::{
    alternating_orientation, balance_search, check_unbalanced, coloring_symmetries,
    disjointness_violations, phi_coloring, psi_coloring, resolve_tiles, thin_triangle_constant,
    unbalanced_orientation, wall_levels, DecoratedWallColoring, Orientation, PhiColor, Resolution,
    Sign, UnbalancedCheck, WallColoring, WallSet, WeightFunction,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// Largest ball on which the thin-triangle constant is measured.
pub const HYPERBOLICITY_RADIUS: usize = 4;

/// The wall-distance threshold `2·C_h + 3`.
pub fn distance_threshold(c_h: usize) -> usize {
    2 * c_h + 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperbolicity {
    pub constant: usize,
    pub radius: usize,
}

/// Walls of a ball with both colorings, levels and the alternating
/// orientation (all start signs +) of the Φ tiling.
pub struct WallData {
    pub ws: WallSet,
    pub kappa: usize,
    pub hyperbolicity: Option<Hyperbolicity>,
    /// `D`; equal decorations of same S-color walls guarantee distance > D.
    pub distance_d: usize,
    pub phi: WallColoring,
    pub psi: DecoratedWallColoring,
    pub levels: Vec<usize>,
    pub orientation: Orientation,
}

pub fn compute_walls(
    p: &CoxeterPresentation,
    radius: usize,
    kappa: usize,
    distance_d: Option<usize>,
) -> Result<WallData> {
    let (hyperbolicity, distance_d) = match distance_d {
        Some(d) => (None, d),
        None => {
            let r = HYPERBOLICITY_RADIUS.min(radius);
            let constant = thin_triangle_constant(p, r)?;
            (Some(Hyperbolicity { constant, radius: r }), distance_threshold(constant))
        }
    };
    let ws = WallSet::new(p, radius)?;
    let phi = phi_coloring(&ws, kappa)?;
    let psi = psi_coloring(&ws, &phi, distance_d + 1);
    let levels = wall_levels(&ws, &phi.ids)?;
    let orientation = alternating_orientation(&levels, &phi.ids, |_| Sign::Plus);
    Ok(WallData {
        ws,
        kappa,
        hyperbolicity,
        distance_d,
        phi,
        psi,
        levels,
        orientation,
    })
}

/// `slots>letter`, with `-` for an empty slot and decoration bits always shown.
pub fn label_text(p: &CoxeterPresentation, label: &AugmentedLabel) -> String {
    let slots: Vec<String> = label
        .entry
        .slots()
        .iter()
        .map(|s| match s {
            None => "-".to_string(),
            Some(l) => format!("{:#}", l.display(p)),
        })
        .collect();
    format!("{}>{}", slots.join(","), p.name(label.letter))
}

/// `S-color:label`, S-color one-based.
pub fn phi_text(p: &CoxeterPresentation, c: &PhiColor) -> String {
    format!("{}:{}", c.s_color.number(), label_text(p, &c.label))
}

#[derive(Serialize)]
struct WallRow {
    wall: String,
    generator: String,
    s_color: usize,
    witness: String,
    level: usize,
    sign: String,
    phi_id: u32,
    phi: String,
    decoration: u32,
    psi_id: u32,
}

pub fn walls_csv(data: &WallData) -> Result<String> {
    let p = data.ws.presentation();
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, wall) in data.ws.walls().iter().enumerate() {
        w.serialize(WallRow {
            wall: p.format(&wall.reflection),
            generator: p.name(wall.generator).to_string(),
            s_color: wall.s_color.number(),
            witness: p.format(&wall.witness),
            level: data.levels[i],
            sign: data.orientation.signs[i].symbol().to_string(),
            phi_id: data.phi.ids[i],
            phi: phi_text(p, data.phi.color(i)),
            decoration: data.psi.decoration[i],
            psi_id: data.psi.ids[i],
        })?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per element of `ball(radius)`: normal form, length, per-color
/// lengths and the ψ coordinate in each color as its label path.
pub fn emit_ball_csv(p: &CoxeterPresentation, radius: usize, kappa: usize) -> Result<String> {
    let ball = p.ball(radius)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["element".to_string(), "length".to_string()];
    header.extend(p.colors().map(|c| format!("length_{}", c.number())));
    header.extend(p.colors().map(|c| format!("psi_{}", c.number())));
    w.write_record(&header)?;
    for g in ball.elements() {
        let point = psi(p, g, kappa)?;
        let mut row = vec![p.format(g), g.len().to_string()];
        row.extend(p.color_lengths(g).iter().map(usize::to_string));
        row.extend(point.components().iter().map(|t| {
            let parts: Vec<String> = t.labels().iter().map(|l| label_text(p, l)).collect();
            parts.join(" / ")
        }));
        w.write_record(&row)?;
    }
    finish_csv(w)
}

/// Seeded nontrivial weight functions with values in `-3..=3` on colors
/// `0..num_colors`.
pub fn seeded_weights(num_colors: usize, count: usize, seed: u64) -> Vec<WeightFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count && num_colors > 0 {
        let w = WeightFunction::new(
            (0..num_colors as u32).map(|c| (c, rng.gen_range(-3..=3))).collect(),
        );
        if !w.is_trivial() {
            out.push(w);
        }
    }
    out
}

fn face_text(face: (u32, Sign)) -> String {
    format!("{}{}", face.0, face.1.symbol())
}

#[derive(Serialize)]
struct ChamberTile {
    element: String,
    faces: Vec<String>,
}

#[derive(Serialize)]
struct TileType {
    faces: Vec<String>,
    count: usize,
}

#[derive(Serialize)]
struct TilesFile {
    radius: usize,
    coloring: &'static str,
    orientation: &'static str,
    start_sign: &'static str,
    chambers: Vec<ChamberTile>,
    types: Vec<TileType>,
}

pub fn tiles_json(p: &CoxeterPresentation, res: &Resolution) -> Result<String> {
    let file = TilesFile {
        radius: res.radius,
        coloring: "phi",
        orientation: "alternating",
        start_sign: "+",
        chambers: res
            .chambers
            .iter()
            .zip(&res.tiles)
            .map(|(g, t)| ChamberTile {
                element: p.format(g),
                faces: t.faces.iter().map(|&f| face_text(f)).collect(),
            })
            .collect(),
        types: res
            .tile_types()
            .into_iter()
            .map(|(faces, count)| TileType {
                faces: faces.into_iter().map(face_text).collect(),
                count,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub radius: usize,
    pub kappa: usize,
    pub distance_d: Option<usize>,
    pub seed: u64,
    pub samples: u64,
    pub weights: usize,
}

#[derive(Serialize)]
pub struct BallSummary {
    pub radius: usize,
    pub elements: usize,
    pub sphere_sizes: Vec<usize>,
}

#[derive(Serialize)]
pub struct BalanceSummary {
    pub weights: usize,
    pub both_found: usize,
    /// Indices of the weight functions missing a sign within the ball.
    pub not_found_in_ball: Vec<usize>,
}

#[derive(Serialize)]
pub struct TilingSummary {
    pub wall_radius: usize,
    pub tile_radius: usize,
    pub walls: usize,
    pub same_color_intersections: usize,
    pub hyperbolicity: Option<Hyperbolicity>,
    pub distance_d: usize,
    pub phi_colors: usize,
    pub decorations: usize,
    pub psi_colors: usize,
    pub max_level: usize,
    pub tiles: usize,
    pub tile_types: usize,
    /// Unit weights under the unbalanced orientation.
    pub unbalanced: UnbalancedCheck,
    /// Seeded weights under the alternating orientation.
    pub balance: BalanceSummary,
    pub symmetry_radius: usize,
    /// Elements whose translation preserves Ψ on the inner walls.
    pub psi_symmetries: Vec<String>,
}

#[derive(Serialize)]
pub struct Report {
    pub group: GroupFile,
    pub config: ConfigEcho,
    pub ball: BallSummary,
    pub nerve: Option<NerveAnalysis>,
    pub embedding: Option<DistortionReport>,
    pub tiling: Option<TilingSummary>,
}

/// Everything a run produces, keyed by output file name.
pub struct Outputs {
    pub report: Report,
    pub files: Vec<(&'static str, String)>,
}

pub fn run_analyses(config: &RunConfig) -> Result<Outputs> {
    config.validate()?;
    let p = config.group.load()?;
    let ball = p.ball(config.radius)?;
    let mut files = Vec::new();
    let nerve = config.analyses.nerve.then(|| analyze(&p));
    let embedding = if config.analyses.embedding {
        let r = distortion_report(&p, config.radius, config.kappa, config.samples, config.seed)?;
        files.push(("distortion.csv", r.histogram_csv()));
        files.push(("ball.csv", emit_ball_csv(&p, config.radius, config.kappa)?));
        Some(r)
    } else {
        None
    };
    let tiling = if config.analyses.tiling {
        let (summary, walls, tiles) = tiling(&p, config)?;
        files.push(("walls.csv", walls));
        files.push(("tiles.json", tiles));
        Some(summary)
    } else {
        None
    };
    let report = Report {
        group: p.to_file(),
        config: ConfigEcho {
            radius: config.radius,
            kappa: config.kappa,
            distance_d: config.distance_d,
            seed: config.seed,
            samples: config.samples,
            weights: config.weights,
        },
        ball: BallSummary {
            radius: config.radius,
            elements: ball.len(),
            sphere_sizes: ball.sphere_sizes(),
        },
        nerve,
        embedding,
        tiling,
    };
    files.push(("report.json", serde_json::to_string_pretty(&report)? + "\n"));
    Ok(Outputs { report, files })
}

fn tiling(p: &CoxeterPresentation, config: &RunConfig) -> Result<(TilingSummary, String, String)> {
    let r = config.radius;
    let data = compute_walls(p, r + 1, config.kappa, config.distance_d)?;
    let ws = &data.ws;
    let res = resolve_tiles(ws, &data.phi.ids, &data.orientation, r)?;
    let unit = WeightFunction::constant(0..data.phi.palette.len() as u32, 1);
    let straight = resolve_tiles(ws, &data.phi.ids, &unbalanced_orientation(ws), r)?;
    let unbalanced = check_unbalanced(&straight, &unit)?;
    let weights = seeded_weights(data.phi.palette.len(), config.weights, config.seed);
    let mut not_found = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        if !balance_search(&res, w)?.both_found() {
            not_found.push(i);
        }
    }
    let symmetry_radius = r / 2;
    let symmetries = coloring_symmetries(ws, &data.psi.ids, symmetry_radius);
    let summary = TilingSummary {
        wall_radius: ws.radius(),
        tile_radius: r,
        walls: ws.len(),
        same_color_intersections: disjointness_violations(ws).len(),
        hyperbolicity: data.hyperbolicity,
        distance_d: data.distance_d,
        phi_colors: data.phi.palette.len(),
        decorations: data.psi.decoration.iter().max().map_or(0, |m| *m as usize + 1),
        psi_colors: data.psi.palette.len(),
        max_level: data.levels.iter().copied().max().unwrap_or(0),
        tiles: res.tiles.len(),
        tile_types: res.tile_types().len(),
        unbalanced,
        balance: BalanceSummary {
            weights: weights.len(),
            both_found: weights.len() - not_found.len(),
            not_found_in_ball: not_found,
        },
        symmetry_radius,
        psi_symmetries: symmetries.iter().map(|g: &GroupElement| p.format(g)).collect(),
    };
    Ok((summary, walls_csv(&data)?, tiles_json(p, &res)?))
}

pub fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

/// Runs the selected analyses and writes their files to `config.out`.
pub fn run_pipeline(config: &RunConfig) -> Result<Report> {
    let out = run_analyses(config)?;
    write_outputs(&config.out, &out.files)?;
    Ok(out.report)
}
