//! Exact modular representation theory of `GL_2` over small finite fields.

pub mod characters;
pub mod curve_cohomology;
pub mod error;
pub mod field_tower;
pub mod gmodule;
pub mod hasse_alpha;
pub mod linalg;
pub mod report;
pub mod serre_maps;

pub use error::{Error, Result};
