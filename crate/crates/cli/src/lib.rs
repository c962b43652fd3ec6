//! Orchestration for the `racg` command: group loading, analysis runs,
//! report files and Poincaré-disk rendering.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod render;

pub use config::{Analyses, GroupSource, RenderConfig, RunConfig, SceneColoring};
pub use error::{CliError, Result};
pub use pipeline::{emit_ball_csv, run_pipeline};
pub use render::{render_svg, run_render, DiskScene};
