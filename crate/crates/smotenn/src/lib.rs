//! Front end for [`smotenn_core`]: KEEL/CSV ingestion, multi-threaded
//! partitioned execution, output files with provenance and manifests,
//! benchmark harness and the `smotenn` command line.

pub mod bench;
pub mod cli;
pub mod engine;
mod error;
pub mod fixtures;
pub mod ingest;
pub mod output;
pub mod report;

pub use error::{Error, Result};
pub use smotenn_core as core;
