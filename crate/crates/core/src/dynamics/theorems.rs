//! Checks of the classical feedback-cycle theorems on concrete networks.

use crate::config::Configuration;
use crate::digraph::Sign;
use crate::error::{Error, Result};
use crate::network::BooleanNetwork;

use super::attractors::{attractors, distances_to};
use super::graph::{build_transition_graph, Caps};
use super::mode::UpdateMode;

/// Outcome of Robert's theorem on an acyclic network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobertVerdict {
    /// The unique fixed point, when the dynamics has exactly one attractor
    /// in both the parallel and the asynchronous mode and it is stable.
    pub fixed_point: Option<Configuration>,
    /// Parallel trajectories reach the fixed point within `n` steps.
    pub parallel_within_n: bool,
    /// Removing self-loops leaves the asynchronous graph acyclic.
    pub asynchronous_acyclic: bool,
    /// Every configuration has an asynchronous path to the fixed point whose
    /// length is its Hamming distance to it.
    pub asynchronous_geodesic: bool,
    pub parallel_convergence_time: usize,
}

impl RobertVerdict {
    pub fn passed(&self) -> bool {
        self.fixed_point.is_some()
            && self.parallel_within_n
            && self.asynchronous_acyclic
            && self.asynchronous_geodesic
    }
}

/// Robert's theorem: an acyclic interaction graph forces a unique stable
/// configuration reached from everywhere.
///
/// Returns [`Error::NotAcyclic`] when the interaction graph has a cycle; the
/// check is then inapplicable rather than failed.
pub fn check_robert(net: &BooleanNetwork, caps: Caps) -> Result<RobertVerdict> {
    let n = net.n();
    if net.interaction_multigraph(caps.asynchronous)?.has_cycle() {
        return Err(Error::NotAcyclic);
    }
    let par = build_transition_graph(net, &UpdateMode::Parallel, caps)?;
    let asy = build_transition_graph(net, &UpdateMode::Asynchronous, caps)?;
    let par_rep = attractors(&par);
    let asy_rep = attractors(&asy);

    let unique = |rep: &super::AttractorReport| {
        (rep.attractors.len() == 1 && rep.attractors[0].is_fixed_point())
            .then(|| rep.attractors[0].least())
    };
    let fixed_point = match (unique(&par_rep), unique(&asy_rep)) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };

    let asynchronous_acyclic = all_sccs_trivial(&asy);

    let asynchronous_geodesic = match fixed_point {
        Some(fp) => {
            let mut target = alloc::vec![false; asy.vertex_count()];
            target[fp.bits() as usize] = true;
            let dist = distances_to(&asy, &target);
            Configuration::all(n)
                .all(|y| dist[y.bits() as usize] == (y.bits() ^ fp.bits()).count_ones())
        }
        None => false,
    };

    Ok(RobertVerdict {
        fixed_point,
        parallel_within_n: fixed_point.is_some() && par_rep.convergence_time <= n,
        asynchronous_acyclic,
        asynchronous_geodesic,
        parallel_convergence_time: par_rep.convergence_time,
    })
}

/// Kahn's algorithm on the distinct non-loop successor relation.
fn all_sccs_trivial(tg: &super::TransitionGraph) -> bool {
    let size = tg.vertex_count();
    let mut indeg = alloc::vec![0u32; size];
    let mut buf = alloc::vec::Vec::new();
    for v in 0..size as u32 {
        tg.successors_into(v, &mut buf);
        for &w in &buf {
            indeg[w as usize] += 1;
        }
    }
    let mut queue: alloc::vec::Vec<u32> = (0..size as u32)
        .filter(|&v| indeg[v as usize] == 0)
        .collect();
    let mut freed = 0;
    while let Some(v) = queue.pop() {
        freed += 1;
        tg.successors_into(v, &mut buf);
        for &w in &buf {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    freed == size
}

/// Whether a necessity clause was asserted and how it fared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The premise holds and so does the conclusion.
    Holds,
    /// The premise holds but the conclusion does not.
    Violated,
    /// The premise does not hold, so nothing is asserted.
    Vacuous,
    /// The clause is not claimed for this updating mode.
    NotAsserted,
}

impl Clause {
    pub fn is_violation(self) -> bool {
        self == Clause::Violated
    }

    fn judge(premise: bool, conclusion: bool) -> Clause {
        match (premise, conclusion) {
            (false, _) => Clause::Vacuous,
            (true, true) => Clause::Holds,
            (true, false) => Clause::Violated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackVerdict {
    pub stable_configurations: usize,
    pub stable_oscillations: usize,
    pub has_positive_cycle: bool,
    pub has_negative_cycle: bool,
    /// At least two stable configurations imply a positive cycle.
    pub positive: Clause,
    /// A stable oscillation implies a negative cycle; asserted for the
    /// asynchronous mode only, since it fails in general (positive cycles
    /// oscillate in parallel).
    pub negative: Clause,
}

impl FeedbackVerdict {
    pub fn passed(&self) -> bool {
        !self.positive.is_violation() && !self.negative.is_violation()
    }
}

/// Positive and negative feedback-cycle necessity on one network and mode.
///
/// Interaction signs come from the multigraph, so an ordered pair realising
/// both signs contributes both, as it does in cycles through it.
pub fn check_feedback_necessity(
    net: &BooleanNetwork,
    mode: &UpdateMode,
    caps: Caps,
) -> Result<FeedbackVerdict> {
    let g = net.interaction_multigraph(caps.for_mode(mode))?;
    let tg = build_transition_graph(net, mode, caps)?;
    let rep = attractors(&tg);
    let stable_configurations = rep.fixed_points().count();
    let stable_oscillations = rep.oscillations().count();
    let has_positive_cycle = g.has_cycle_with_sign(Sign::Positive);
    let has_negative_cycle = g.has_cycle_with_sign(Sign::Negative);
    let negative = if *mode == UpdateMode::Asynchronous {
        Clause::judge(stable_oscillations > 0, has_negative_cycle)
    } else {
        Clause::NotAsserted
    };
    Ok(FeedbackVerdict {
        stable_configurations,
        stable_oscillations,
        has_positive_cycle,
        has_negative_cycle,
        positive: Clause::judge(stable_configurations >= 2, has_positive_cycle),
        negative,
    })
}
