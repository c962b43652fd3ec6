use std::fs;
use std::path::{Path, PathBuf};

use racg::group::CoxeterPresentation;

use crate::error::{CliError, Result};

/// Where the group comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSource {
    File(PathBuf),
    /// The right-angled `p`-gon group with generators `s1..sp`.
    Polygon(usize),
}

impl GroupSource {
    pub fn load(&self) -> Result<CoxeterPresentation> {
        match self {
            GroupSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Ok(CoxeterPresentation::from_json(&text)?)
            }
            GroupSource::Polygon(p) => Ok(CoxeterPresentation::polygon(*p)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Analyses {
    pub nerve: bool,
    pub embedding: bool,
    pub tiling: bool,
}

impl Analyses {
    pub const ALL: Self = Self {
        nerve: true,
        embedding: true,
        tiling: true,
    };
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub group: GroupSource,
    pub radius: usize,
    pub kappa: usize,
    /// `None` measures the thin-triangle constant and uses `2·C_h + 3`.
    pub distance_d: Option<usize>,
    pub seed: u64,
    /// Pairs sampled for the distortion report; 0 means every pair.
    pub samples: u64,
    /// Seeded random weight functions tried in the balance search.
    pub weights: usize,
    pub analyses: Analyses,
    pub out: PathBuf,
}

impl RunConfig {
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn new(group: GroupSource, out: impl AsRef<Path>) -> Self {
        Self {
            group,
            radius: 4,
            kappa: 2,
            distance_d: None,
            seed: Self::DEFAULT_SEED,
            samples: 100_000,
            weights: 20,
            analyses: Analyses::ALL,
            out: out.as_ref().to_path_buf(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa == 0 {
            return Err(CliError::Config("κ must be at least 1".into()));
        }
        if self.analyses.tiling && self.radius == 0 {
            return Err(CliError::Config("tiling needs radius at least 1".into()));
        }
        Ok(())
    }
}

/// Which wall coloring strokes the rendered edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SceneColoring {
    Phi,
    Psi,
}

#[derive(Clone, Debug)]
pub struct RenderConfig {
    pub group: GroupSource,
    pub depth: usize,
    pub kappa: usize,
    pub distance_d: Option<usize>,
    pub coloring: SceneColoring,
    pub out: PathBuf,
}
