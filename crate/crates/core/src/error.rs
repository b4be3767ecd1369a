use alloc::string::String;

use thiserror::Error;

/// Errors raised by the analysis engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("automaton index {index} out of range for a network of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("configuration width {got} does not match network size {expected}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("update set must not be empty")]
    EmptyUpdateSet,

    #[error("network size {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("interaction {source_automaton} -> {target} is both activating and inhibiting")]
    NonSimpleInteraction {
        source_automaton: usize,
        target: usize,
    },

    #[error("width {0} exceeds the supported maximum of 64 automata")]
    TooWide(usize),

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("argument {0} is outside the function's domain")]
    OutOfDomain(i64),

    #[error("{p} does not divide the order {omega}")]
    NotADivisor { p: u64, omega: u64 },

    #[error("X~({p}) / {p} is not an integer")]
    IntegralityViolation { p: u64 },

    #[error("bounds check excludes {0}")]
    ExcludedDescriptor(String),

    #[error("network is not acyclic")]
    NotAcyclic,

    #[error("builtin `{name}` is inapplicable: {reason}")]
    InapplicableBuiltin { name: String, reason: String },

    #[error("instruction addresses automaton {index} of a cycle of size {size}")]
    BadInstructionIndex { index: usize, size: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
