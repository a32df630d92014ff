//! File formats, reports and the command line front end for
//! [`polyperiod_core`].
//!
//! * [`obj`] reads and writes closed triangle meshes.
//! * [`gluing`] reads and writes square-tiled gluings as JSON.
//! * [`data`] holds the bundled genus two gluings.
//! * [`cli`] implements the `polyperiod` binary.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod gluing;
pub mod obj;
pub mod report;

pub use error::CliError;
