//! Exact analysis of Boolean automata networks.
//!
//! The crate builds networks (general ones, canonical cycles and
//! double-cycles), enumerates their transition graphs under the parallel,
//! block-sequential, asynchronous and elementary updating modes, computes
//! closed-form attractor counts with exact arithmetic, and runs update
//! programs on asynchronous double-cycles. It needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod config;
pub mod digraph;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod network;
pub mod topology;
pub mod vm;

pub use config::{AutomatonSet, Configuration};
pub use digraph::{Sign, SignedDigraph};
pub use error::{Error, Result};
pub use expr::Expr;
pub use network::{BooleanNetwork, LocalFunction};
