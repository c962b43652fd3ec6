use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use racg::morse_thue::{assert_cube_free, mt_prefix};
use racg_cli::{
    run_pipeline, run_render, Analyses, CliError, GroupSource, RenderConfig, RunConfig,
    SceneColoring,
};

#[derive(Parser)]
#[command(name = "racg", version, about = "Right-angled Coxeter groups: embeddings and aperiodic wall tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nerve, embedding and tiling analyses in one run.
    Analyze(RunArgs),
    /// Distortion of the diary-tree embedding on a ball.
    Embed(RunArgs),
    /// Wall colorings, tiles and balance checks.
    Tile(RunArgs),
    /// Poincaré-disk picture of a p-gon group.
    Render(RenderArgs),
    /// Morse–Thue prefix and cube check.
    MorseThue(MorseThueArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Group definition file (JSON).
    #[arg(required_unless_present = "polygon")]
    group: Option<PathBuf>,
    /// Use the right-angled p-gon group instead of a file.
    #[arg(long, conflicts_with = "group")]
    polygon: Option<usize>,
}

impl GroupArgs {
    fn source(&self) -> GroupSource {
        match (&self.group, self.polygon) {
            (Some(path), _) => GroupSource::File(path.clone()),
            (None, Some(p)) => GroupSource::Polygon(p),
            (None, None) => unreachable!("clap requires one of them"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    #[arg(long, default_value_t = 2)]
    kappa: usize,
    /// Wall-distance threshold D; measured as 2·C_h + 3 when omitted.
    #[arg(long = "distance-D")]
    distance_d: Option<usize>,
    #[arg(long, default_value_t = RunConfig::DEFAULT_SEED)]
    seed: u64,
    /// Pairs sampled for the distortion report (0 = all pairs).
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Random weight functions tried in the balance search.
    #[arg(long, default_value_t = 20)]
    weights: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self, analyses: Analyses) -> RunConfig {
        RunConfig {
            group: self.group.source(),
            radius: self.radius,
            kappa: self.kappa,
            distance_d: self.distance_d,
            seed: self.seed,
            samples: self.samples,
            weights: self.weights,
            analyses,
            out: self.out.clone(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringArg {
    Phi,
    Psi,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Word length of the outermost chambers drawn.
    #[arg(long, visible_alias = "radius", default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 2)]
    kappa: usize,
    #[arg(long = "distance-D")]
    distance_d: Option<usize>,
    #[arg(long, value_enum, default_value_t = ColoringArg::Phi)]
    coloring: ColoringArg,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct MorseThueArgs {
    /// Length of the prefix checked for cubes.
    #[arg(long, default_value_t = 65_536)]
    bits: usize,
    /// Leading bits printed.
    #[arg(long, default_value_t = 64)]
    print: usize,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(a) => summarize(&run_pipeline(&a.config(Analyses::ALL))?),
        Command::Embed(a) => summarize(&run_pipeline(&a.config(Analyses {
            nerve: false,
            embedding: true,
            tiling: false,
        }))?),
        Command::Tile(a) => summarize(&run_pipeline(&a.config(Analyses {
            nerve: false,
            embedding: false,
            tiling: true,
        }))?),
        Command::Render(a) => {
            let scene = run_render(&RenderConfig {
                group: a.group.source(),
                depth: a.depth,
                kappa: a.kappa,
                distance_d: a.distance_d,
                coloring: match a.coloring {
                    ColoringArg::Phi => SceneColoring::Phi,
                    ColoringArg::Psi => SceneColoring::Psi,
                },
                out: a.out.clone(),
            })?;
            println!("{} chambers written to {}", scene.chambers.len(), a.out.join("scene.svg").display());
        }
        Command::MorseThue(a) => {
            let bits: String = mt_prefix(a.print.min(a.bits)).iter().map(|b| char::from(b'0' + b)).collect();
            println!("{bits}");
            match assert_cube_free(a.bits)? {
                None => println!("no cube in the first {} bits", a.bits),
                Some(c) => {
                    println!("cube of block {} at offset {}", c.block, c.offset);
                    return Err(CliError::Config("Morse–Thue prefix contains a cube".into()));
                }
            }
        }
    }
    Ok(())
}

fn summarize(report: &racg_cli::pipeline::Report) {
    println!("ball({}): {} elements", report.ball.radius, report.ball.elements);
    if let Some(n) = &report.nerve {
        println!("hyperbolic: {}, chromatic number: {}", n.hyperbolic, n.chromatic_number);
    }
    if let Some(e) = &report.embedding {
        println!(
            "embedding: {} pairs, injective: {}, lipschitz violations: {}, radial violations: {}",
            e.pairs, e.injective, e.lipschitz_violations, e.radial_violations
        );
    }
    if let Some(t) = &report.tiling {
        println!(
            "tiling: {} walls, {} Φ colors, {} Ψ colors, D = {}, {} tile types",
            t.walls, t.phi_colors, t.psi_colors, t.distance_d, t.tile_types
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
