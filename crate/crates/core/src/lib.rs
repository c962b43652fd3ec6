//! Right-angled Coxeter groups, diary-tree embeddings into products of trees,
//! and aperiodic wall colorings of their chamber systems.

pub mod embedding;
pub mod error;
pub mod group;
pub mod morse_thue;
pub mod nerve;
pub mod normal_form;
pub mod walls;

pub use error::{Error, Result};
pub use group::{Ball, Color, CoxeterPresentation, Gen, GroupElement};
