use alloc::vec;
use alloc::vec::Vec;

use crate::config::Configuration;

use super::graph::TransitionGraph;

/// A terminal strongly connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    /// Members in ascending lexicographic order.
    pub states: Vec<Configuration>,
    /// Minimal period, reported for deterministic modes only.
    pub period: Option<usize>,
}

impl Attractor {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_fixed_point(&self) -> bool {
        self.states.len() == 1
    }

    pub fn least(&self) -> Configuration {
        self.states[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorReport {
    pub n: usize,
    /// Sorted by (length, least member).
    pub attractors: Vec<Attractor>,
    pub convergence_time: usize,
}

impl AttractorReport {
    pub fn recurring_count(&self) -> usize {
        self.attractors.iter().map(Attractor::len).sum()
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = &Attractor> {
        self.attractors.iter().filter(|a| a.is_fixed_point())
    }

    pub fn oscillations(&self) -> impl Iterator<Item = &Attractor> {
        self.attractors.iter().filter(|a| !a.is_fixed_point())
    }
}

/// Attractors, using cycle detection on functional graphs and SCCs otherwise.
pub fn attractors(tg: &TransitionGraph) -> AttractorReport {
    let comps = if tg.is_deterministic() {
        functional_cycles(tg)
    } else {
        terminal_sccs(tg)
    };
    report(tg, comps)
}

/// Attractors through the general SCC path regardless of mode.
pub fn attractors_via_scc(tg: &TransitionGraph) -> AttractorReport {
    report(tg, terminal_sccs(tg))
}

fn report(tg: &TransitionGraph, comps: Vec<Vec<u32>>) -> AttractorReport {
    let mut recurring = vec![false; tg.vertex_count()];
    let mut list: Vec<Attractor> = comps
        .into_iter()
        .map(|comp| {
            for &v in &comp {
                recurring[v as usize] = true;
            }
            let mut states: Vec<Configuration> = comp.iter().map(|&v| tg.config(v)).collect();
            states.sort();
            let period = tg.is_deterministic().then_some(states.len());
            Attractor { states, period }
        })
        .collect();
    list.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.least().cmp(&b.least()))
    });
    let convergence_time = distances_to(tg, &recurring).into_iter().max().unwrap_or(0) as usize;
    AttractorReport {
        n: tg.n(),
        attractors: list,
        convergence_time,
    }
}

/// Which vertices lie in some attractor.
pub fn recurring_mask(tg: &TransitionGraph) -> Vec<bool> {
    let comps = if tg.is_deterministic() {
        functional_cycles(tg)
    } else {
        terminal_sccs(tg)
    };
    let mut mask = vec![false; tg.vertex_count()];
    for v in comps.into_iter().flatten() {
        mask[v as usize] = true;
    }
    mask
}

/// Recurring configurations in ascending packed-word order.
pub fn recurring_set(tg: &TransitionGraph) -> Vec<Configuration> {
    recurring_mask(tg)
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(v, _)| tg.config(v as u32))
        .collect()
}

/// Longest shortest trajectory into the recurring set.
pub fn convergence_time(tg: &TransitionGraph) -> usize {
    let rec = recurring_mask(tg);
    distances_to(tg, &rec).into_iter().max().unwrap_or(0) as usize
}

/// Shortest distance from every vertex to the marked set.
pub fn distances_to(tg: &TransitionGraph, targets: &[bool]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let size = tg.vertex_count();
    let mut dist: Vec<u32> = targets.iter().map(|&t| if t { 0 } else { UNSET }).collect();
    if tg.is_deterministic() {
        // reverse breadth-first search over the predecessor lists
        let mut count = vec![0u32; size + 1];
        for v in 0..size as u32 {
            count[tg.successor(v).expect("functional") as usize + 1] += 1;
        }
        for k in 0..size {
            count[k + 1] += count[k];
        }
        let mut fill = count.clone();
        let mut preds = vec![0u32; size];
        for v in 0..size as u32 {
            let w = tg.successor(v).expect("functional") as usize;
            preds[fill[w] as usize] = v;
            fill[w] += 1;
        }
        let mut queue: Vec<u32> = (0..size as u32).filter(|&v| targets[v as usize]).collect();
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head];
            head += 1;
            for &v in &preds[count[w as usize] as usize..count[w as usize + 1] as usize] {
                if dist[v as usize] == UNSET {
                    dist[v as usize] = dist[w as usize] + 1;
                    queue.push(v);
                }
            }
        }
    } else {
        // Layered relaxation: the fanout of elementary graphs makes explicit
        // predecessor lists too large, while the number of layers stays small.
        let mut pending: Vec<u32> = (0..size as u32).filter(|&v| !targets[v as usize]).collect();
        let mut buf = Vec::new();
        let mut layer = 0;
        while !pending.is_empty() {
            layer += 1;
            let mut reached = Vec::new();
            pending.retain(|&v| {
                tg.successors_into(v, &mut buf);
                if buf.iter().any(|&w| dist[w as usize] < layer) {
                    reached.push(v);
                    false
                } else {
                    true
                }
            });
            if reached.is_empty() {
                break;
            }
            for v in reached {
                dist[v as usize] = layer;
            }
        }
    }
    dist
}

/// Cycles of a functional graph, by iterate-and-mark.
fn functional_cycles(tg: &TransitionGraph) -> Vec<Vec<u32>> {
    const NEW: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let size = tg.vertex_count();
    let succ = |v: u32| tg.successor(v).expect("functional");
    let mut color = vec![NEW; size];
    let mut path = Vec::new();
    let mut cycles = Vec::new();
    for start in 0..size as u32 {
        if color[start as usize] != NEW {
            continue;
        }
        let mut v = start;
        while color[v as usize] == NEW {
            color[v as usize] = ACTIVE;
            path.push(v);
            v = succ(v);
        }
        if color[v as usize] == ACTIVE {
            let mut cycle = vec![v];
            let mut w = succ(v);
            while w != v {
                cycle.push(w);
                w = succ(w);
            }
            cycles.push(cycle);
        }
        for u in path.drain(..) {
            color[u as usize] = DONE;
        }
    }
    cycles
}

/// Terminal SCCs by an iterative Tarjan pass over distinct non-loop successors.
pub fn terminal_sccs(tg: &TransitionGraph) -> Vec<Vec<u32>> {
    const UNVISITED: u32 = u32::MAX;
    let size = tg.vertex_count();
    let mut index = vec![UNVISITED; size];
    let mut low = vec![0u32; size];
    let mut on_stack = vec![false; size];
    let mut comp_of = vec![UNVISITED; size];
    let mut stack: Vec<u32> = Vec::new();
    let mut comps: Vec<Vec<u32>> = Vec::new();
    // frame: vertex, its successor list, cursor
    let mut frames: Vec<(u32, Vec<u32>, usize)> = Vec::new();
    let mut next = 0u32;
    let mut spare: Vec<Vec<u32>> = Vec::new();

    for root in 0..size as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        macro_rules! open {
            ($v:expr) => {{
                let v: u32 = $v;
                index[v as usize] = next;
                low[v as usize] = next;
                next += 1;
                stack.push(v);
                on_stack[v as usize] = true;
                let mut succ = spare.pop().unwrap_or_default();
                tg.successors_into(v, &mut succ);
                frames.push((v, succ, 0));
            }};
        }
        open!(root);
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w as usize] == UNVISITED {
                    open!(w);
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            let (_, succ, _) = frames.pop().expect("nonempty");
            spare.push(succ);
            if let Some(parent) = frames.last() {
                let p = parent.0 as usize;
                low[p] = low[p].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let id = comps.len() as u32;
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("vertex on stack");
                    on_stack[w as usize] = false;
                    comp_of[w as usize] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }

    let mut buf = Vec::new();
    comps
        .into_iter()
        .enumerate()
        .filter(|(id, comp)| {
            comp.iter().all(|&v| {
                tg.successors_into(v, &mut buf);
                buf.iter().all(|&w| comp_of[w as usize] == *id as u32)
            })
        })
        .map(|(_, comp)| comp)
        .collect()
}
