//! An interpreter for update instructions on asynchronous double-cycles.
//!
//! A configuration is read as two words sharing automaton `c` (global 0):
//! `x^ℓ = x_0 x_1 … x_{ℓ-1}` and `x^r = x_0 x_ℓ … x_{ℓ+r-2}`. Instructions
//! address automata by their position in one of the words.

mod machine;
mod programs;
mod verify;

pub use machine::{exec, expressiveness, ExecOutcome, Instruction, Step, VmState};
pub use programs::{
    alternating, alternating_left, compile_builtin, run, run_traced, Builtin, CopyCondition,
    Program, TraceRecord,
};
pub use verify::{
    verify_sequence_theorems, AttractorCheck, BoundBasis, BuiltinCheck, ClosureCheck,
    Counterexample, SequenceReport,
};
