//! Swarm bounded model checking for a small imperative language.
//!
//! Programs written in the `.imp` language mark their features with
//! `log("label")` statements. A swarm run checks many variants of one
//! program, each with a different subset of features disabled, in parallel.
//! Each variant is unrolled to a fixed depth, bit-blasted to CNF and handed
//! to a CDCL solver; any counterexample is replayed on the original program
//! before it is reported.
//!
//! The pipeline stages live in their own modules:
//!
//! - [`frontend`]: parsing, semantic checks, feature extraction
//! - [`transform`]: feature omission, inlining, unrolling, SSA
//! - [`encode`]: slicing, bit-blasting, DIMACS output
//! - [`sat`]: the CDCL solver
//! - [`interp`]: the concrete interpreter and brute-force oracle
//! - [`bmc`]: single-configuration checking and counterexamples
//! - [`swarm`]: configuration sampling, parallel runs, aggregation
//! - [`cli`]: the `swarm-bmc` command line

pub mod benchmarks;
pub mod bmc;
pub mod cli;
pub mod encode;
pub mod frontend;
pub mod interp;
pub mod sat;
pub mod swarm;
pub mod transform;
pub mod value;

pub use bmc::{check, BmcOptions, Counterexample, OutcomeKind, VerificationOutcome};
pub use frontend::{extract_features, parse, parse_named, validate, FeatureSet, Program};
pub use swarm::{run_swarm, SwarmOptions, SwarmReport, Verdict};
pub use value::Width;
