//! File formats, parallel drivers and the command-line front end for
//! `ksplit-core`.
//!
//! The core crate holds every algorithm and stays `no_std`. This crate adds
//! the JSON map, split, subdivision, poset and report formats, rayon-backed
//! split-index computation and the `ksplit` binary.

#![forbid(unsafe_code)]

pub mod cli;
pub mod formats;
pub mod parallel;

pub use cli::run;
