//! Range-partitioned graph construction on the rayon pool.

use ban_core::dynamics::{Caps, TransitionGraph, UpdateMode};
use ban_core::BooleanNetwork;
use rayon::prelude::*;

/// Vertices per work item.
const CHUNK: u64 = 1 << 14;

/// Same graph as `build_transition_graph`, with vertex ranges computed in
/// parallel and concatenated in order.
pub fn build_transition_graph_par(
    net: &BooleanNetwork,
    mode: &UpdateMode,
    caps: Caps,
) -> ban_core::Result<TransitionGraph> {
    TransitionGraph::check_buildable(net, mode, caps)?;
    let size = 1u64 << net.n();
    let starts: Vec<u64> = (0..size).step_by(CHUNK as usize).collect();
    let parts: Vec<Vec<u32>> = starts
        .into_par_iter()
        .map(|s| TransitionGraph::compute_part(net, mode, s..(s + CHUNK).min(size)))
        .collect();
    TransitionGraph::from_parts(net.n(), mode.clone(), parts)
}
