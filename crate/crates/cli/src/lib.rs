//! Std-side companion to the computation core: file formats, the
//! repeated-attempt sampler with its bias bookkeeping, and the empirical
//! uniformity harness. The binary in `main.rs` wires these into
//! subcommands with JSON output.

pub mod formats;
pub mod sampler;
