//! File formats and commands for `maxsurf-core`: the key-value surface
//! config, versioned JSON reports, and OBJ meshes with a JSON sidecar.

pub mod commands;
pub mod config;
pub mod mesh;
pub mod report;

pub use commands::Outcome;
pub use config::{ConfigError, Model, SurfaceConfig};
