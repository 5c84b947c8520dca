//! File formats, instance generation and the command-line front end for
//! [`pcst_core`].
//!
//! * [`stp`]: the prize-collecting STP instance dialect and solution files.
//! * [`generate`]: seeded random connected instances.
//! * [`solve`]: one configured solver run and its report.
//! * [`cli`]: the `pcst` program (`solve`, `postprocess`, `generate`,
//!   `verify`, `bench`).

pub mod bench;
pub mod cli;
pub mod generate;
pub mod solve;
pub mod stp;

pub use pcst_core;
