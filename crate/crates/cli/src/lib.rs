//! Manifest-driven front end for `ramlab-core`.

pub mod manifest;
pub mod report;
pub mod run;

pub use manifest::{parse_manifest, Diagnostic, Manifest};
pub use report::{to_csv, to_json, to_text, write_outputs, Format};
pub use run::{run_manifest, RunOptions, RunReport};

use ramlab_core::ramification::PrecisionPolicy;

/// The default precision policy, with the guard overridden when given.
pub fn ramification_policy(guard: Option<i64>) -> PrecisionPolicy {
    let base = PrecisionPolicy::default();
    PrecisionPolicy { guard: guard.unwrap_or(base.guard), ..base }
}
