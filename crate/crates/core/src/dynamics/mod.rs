//! Transition graphs under the updating modes, their attractors, and
//! checks of the feedback-cycle theorems.

mod attractors;
mod graph;
mod mode;
pub mod random;
mod theorems;

pub use attractors::{
    attractors, attractors_via_scc, convergence_time, distances_to, recurring_mask, recurring_set,
    terminal_sccs, Attractor, AttractorReport,
};
pub use graph::{
    build_transition_graph, ArcLabel, Caps, TransitionGraph, DEFAULT_CAP, DEFAULT_ELEMENTARY_CAP,
    HARD_CAP,
};
pub use mode::{BlockPartition, UpdateMode};
pub use theorems::{
    check_feedback_necessity, check_robert, Clause, FeedbackVerdict, RobertVerdict,
};
