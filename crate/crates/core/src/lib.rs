//! Single-flaw dynamics on proper k-colorings.
//!
//! The library has four layers:
//!
//! * [`graph`] — simple undirected graphs, linear orders, minimal vertex
//!   separators, and the vertex separation number (equal to pathwidth);
//! * [`coloring`] / [`space`] — colorings, the proper / singly-flawed
//!   classification, exhaustive state-space enumeration, and the flaw-repair
//!   map from singly-flawed states onto proper ones;
//! * [`chain`] — the single-flaw chain and the Glauber baseline: single
//!   steps, seeded trajectories, exact transition matrices, total-variation
//!   mixing times, and the closed-form congestion upper bound on mixing;
//! * [`flow`] — the canonical-path multicommodity flow routed through a
//!   separator schedule, plus exact congestion audits against the
//!   per-transition, per-phase, and global bounds.
//!
//! Everything is deterministic: ordered containers throughout, exact
//! rational arithmetic for flows and transition probabilities, and
//! counter-based RNG seeding for simulation.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod chain;
pub mod coloring;
pub mod flow;
pub mod graph;
pub mod space;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
