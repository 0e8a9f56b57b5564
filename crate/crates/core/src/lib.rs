//! Single-pass compression of AIS vessel trajectories into annotated
//! critical points, with genetic-algorithm tuning of the compression
//! parameters per vessel type.
//!
//! ```
//! use vessel_synopses::evaluation::evaluate_config;
//! use vessel_synopses::synopsis::SynopsisConfig;
//! use vessel_synopses::synthetic;
//!
//! let tracks = synthetic::mixed_dataset(1);
//! let m = evaluate_config(&tracks, &SynopsisConfig::default()).unwrap();
//! assert!(m.ratio < 0.5);
//! ```
//!
//! Modules follow the pipeline: [`ais`] parses and partitions input,
//! [`noise`] drops implausible fixes, [`geo`] holds the kinematics,
//! [`synopsis`] detects critical points, [`evaluation`] scores synopses,
//! [`ga`] tunes parameters and [`harness`] drives whole runs.

pub mod ais;
pub mod error;
pub mod evaluation;
pub mod ga;
pub mod geo;
pub mod harness;
mod json;
pub mod noise;
pub mod synopsis;
pub mod synthetic;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ingest.md")]
    mod ingest {}
    #[doc = include_str!("../../../book/src/kinematics.md")]
    mod kinematics {}
    #[doc = include_str!("../../../book/src/synopses.md")]
    mod synopses {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/tuning.md")]
    mod tuning {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
