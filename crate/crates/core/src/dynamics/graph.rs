use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::config::{AutomatonSet, Configuration};
use crate::error::{Error, Result};
use crate::network::BooleanNetwork;

use super::mode::UpdateMode;

/// Default enumeration cap for parallel, block-sequential and asynchronous graphs.
pub const DEFAULT_CAP: usize = 20;
/// Default cap for elementary graphs, whose fanout is `2^n - 1`.
pub const DEFAULT_ELEMENTARY_CAP: usize = 14;
/// Vertices are stored as `u32`; beyond this the tables would not fit anyway.
pub const HARD_CAP: usize = 30;

/// Per-mode bounds on `n` for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub deterministic: usize,
    pub asynchronous: usize,
    pub elementary: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            deterministic: DEFAULT_CAP,
            asynchronous: DEFAULT_CAP,
            elementary: DEFAULT_ELEMENTARY_CAP,
        }
    }
}

impl Caps {
    /// The same cap for every mode.
    pub fn uniform(cap: usize) -> Self {
        Self {
            deterministic: cap,
            asynchronous: cap,
            elementary: cap,
        }
    }

    pub fn for_mode(&self, mode: &UpdateMode) -> usize {
        let cap = match mode {
            UpdateMode::Parallel | UpdateMode::BlockSequential(_) => self.deterministic,
            UpdateMode::Asynchronous => self.asynchronous,
            UpdateMode::Elementary => self.elementary,
        };
        cap.min(HARD_CAP)
    }

    pub fn check(&self, n: usize, mode: &UpdateMode) -> Result<()> {
        let cap = self.for_mode(mode);
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        Ok(())
    }
}

/// Label of a transition: the update set `W`, or a whole block-sequential sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcLabel {
    Set(AutomatonSet),
    Sweep,
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcLabel::Set(w) => f.write_str(&w.render()),
            ArcLabel::Sweep => f.write_str("sweep"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Store {
    /// `succ[x]` for deterministic modes.
    Functional(Vec<u32>),
    /// `U(x)` for asynchronous and elementary modes; the arcs are
    /// `x → x ⊕ (W ∩ U(x))` for every admissible `W`.
    Unstable(Vec<u32>),
}

/// The transition graph of a network under one updating mode, over all of `B^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    n: usize,
    mode: UpdateMode,
    store: Store,
}

/// Builds the full transition graph on the calling thread.
pub fn build_transition_graph(
    net: &BooleanNetwork,
    mode: &UpdateMode,
    caps: Caps,
) -> Result<TransitionGraph> {
    TransitionGraph::check_buildable(net, mode, caps)?;
    let part = TransitionGraph::compute_part(net, mode, 0..1u64 << net.n());
    TransitionGraph::from_parts(net.n(), mode.clone(), alloc::vec![part])
}

impl TransitionGraph {
    pub fn check_buildable(net: &BooleanNetwork, mode: &UpdateMode, caps: Caps) -> Result<()> {
        caps.check(net.n(), mode)?;
        if let UpdateMode::BlockSequential(p) = mode {
            if p.n() != net.n() {
                return Err(Error::WidthMismatch {
                    expected: net.n(),
                    got: p.n(),
                });
            }
        }
        Ok(())
    }

    /// Raw per-vertex data for the vertices in `range`. Ranges computed
    /// independently may be concatenated with [`TransitionGraph::from_parts`].
    pub fn compute_part(net: &BooleanNetwork, mode: &UpdateMode, range: Range<u64>) -> Vec<u32> {
        let n = net.n();
        range
            .map(|b| {
                let x = Configuration::raw(n, b);
                let v = match mode.step(net, &x) {
                    Some(y) => y.bits(),
                    None => net.unstable_set(&x).mask(),
                };
                v as u32
            })
            .collect()
    }

    /// Concatenates parts in order; together they must cover `0..2^n`.
    pub fn from_parts(n: usize, mode: UpdateMode, parts: Vec<Vec<u32>>) -> Result<Self> {
        let total: usize = parts.iter().map(Vec::len).sum();
        if n > HARD_CAP || total != 1usize << n {
            return Err(Error::WidthMismatch {
                expected: 1usize << n.min(HARD_CAP),
                got: total,
            });
        }
        let mut data = Vec::with_capacity(total);
        for p in parts {
            data.extend(p);
        }
        let store = if mode.is_deterministic() {
            Store::Functional(data)
        } else {
            Store::Unstable(data)
        };
        Ok(Self { n, mode, store })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> &UpdateMode {
        &self.mode
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.store, Store::Functional(_))
    }

    #[inline]
    pub(crate) fn config(&self, v: u32) -> Configuration {
        Configuration::raw(self.n, v as u64)
    }

    /// The unique successor in deterministic modes.
    #[inline]
    pub fn successor(&self, v: u32) -> Option<u32> {
        match &self.store {
            Store::Functional(s) => Some(s[v as usize]),
            Store::Unstable(_) => None,
        }
    }

    /// `U(x)` in nondeterministic modes.
    #[inline]
    pub fn unstable_mask(&self, v: u32) -> Option<u32> {
        match &self.store {
            Store::Unstable(u) => Some(u[v as usize]),
            Store::Functional(_) => None,
        }
    }

    /// Distinct targets other than `v` itself, written into `out`.
    pub fn successors_into(&self, v: u32, out: &mut Vec<u32>) {
        out.clear();
        match &self.store {
            Store::Functional(s) => {
                let w = s[v as usize];
                if w != v {
                    out.push(w);
                }
            }
            Store::Unstable(u) => {
                let u = u[v as usize];
                match self.mode {
                    UpdateMode::Asynchronous => {
                        let mut rest = u;
                        while rest != 0 {
                            let bit = rest & rest.wrapping_neg();
                            out.push(v ^ bit);
                            rest ^= bit;
                        }
                    }
                    _ => {
                        // every nonempty subset S of U(x) gives x ⊕ S
                        let mut s = u;
                        while s != 0 {
                            out.push(v ^ s);
                            s = (s - 1) & u;
                        }
                    }
                }
            }
        }
    }

    pub fn successors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        self.successors_into(v, &mut out);
        out
    }

    /// Out-degree counting every label, self-loops and duplicate targets included.
    pub fn out_degree(&self) -> u64 {
        match self.mode {
            UpdateMode::Parallel | UpdateMode::BlockSequential(_) => 1,
            UpdateMode::Asynchronous => self.n as u64,
            UpdateMode::Elementary => (1u64 << self.n) - 1,
        }
    }

    pub fn arc_count(&self) -> u64 {
        self.out_degree() * self.vertex_count() as u64
    }

    /// Calls `f(label, target)` for every labelled arc leaving `v`.
    pub fn for_each_labeled_arc(&self, v: u32, mut f: impl FnMut(ArcLabel, u32)) {
        match &self.store {
            Store::Functional(s) => {
                let label = match self.mode {
                    UpdateMode::BlockSequential(_) => ArcLabel::Sweep,
                    _ => ArcLabel::Set(AutomatonSet::all(self.n)),
                };
                f(label, s[v as usize]);
            }
            Store::Unstable(u) => {
                let u = u[v as usize];
                match self.mode {
                    UpdateMode::Asynchronous => {
                        for i in 0..self.n {
                            f(
                                ArcLabel::Set(AutomatonSet::singleton(i)),
                                v ^ (u & (1 << i)),
                            );
                        }
                    }
                    _ => {
                        for w in 1u32..1 << self.n {
                            f(
                                ArcLabel::Set(AutomatonSet::from_mask(w as u64)),
                                v ^ (w & u),
                            );
                        }
                    }
                }
            }
        }
    }

    /// Every labelled arc leaving `x`.
    pub fn labeled_arcs(&self, x: &Configuration) -> Vec<(ArcLabel, Configuration)> {
        let mut out = Vec::new();
        self.for_each_labeled_arc(x.bits() as u32, |label, w| {
            out.push((label, self.config(w)))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::mode::BlockPartition;
    use alloc::collections::BTreeSet;
    use alloc::string::String;

    fn fig1() -> BooleanNetwork {
        BooleanNetwork::parse(&[
            "x0 or not x1",
            "not x0 or not x1 or x2",
            "not x0 or not x1 or not x2",
        ])
        .unwrap()
    }

    fn render_arcs(g: &TransitionGraph) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for x in Configuration::all(g.n()) {
            for (_, y) in g.labeled_arcs(&x) {
                out.insert((alloc::format!("{x}"), alloc::format!("{y}")));
            }
        }
        out
    }

    #[test]
    fn figure_two_parallel_arcs() {
        let g = build_transition_graph(&fig1(), &UpdateMode::Parallel, Caps::default()).unwrap();
        let arcs = render_arcs(&g);
        let expected = [
            ("000", "111"),
            ("001", "111"),
            ("010", "011"),
            ("011", "011"),
            ("100", "111"),
            ("101", "111"),
            ("110", "101"),
            ("111", "110"),
        ];
        let expected: BTreeSet<_> = expected
            .iter()
            .map(|(a, b)| (String::from(*a), String::from(*b)))
            .collect();
        assert_eq!(arcs, expected);
        assert_eq!(g.arc_count(), 8);
    }

    #[test]
    fn asynchronous_graph_has_n_labels_per_vertex() {
        let g =
            build_transition_graph(&fig1(), &UpdateMode::Asynchronous, Caps::default()).unwrap();
        assert_eq!(g.arc_count(), 24);
        let x: Configuration = "000".parse().unwrap();
        let arcs = g.labeled_arcs(&x);
        assert_eq!(arcs.len(), 3);
        assert_eq!(alloc::format!("{}", arcs[1].1), "010");
    }

    #[test]
    fn elementary_targets_are_the_unstable_subsets() {
        let net = fig1();
        let g = build_transition_graph(&net, &UpdateMode::Elementary, Caps::default()).unwrap();
        for x in Configuration::all(3) {
            let arcs = g.labeled_arcs(&x);
            assert_eq!(arcs.len(), 7);
            for (label, y) in &arcs {
                let ArcLabel::Set(w) = label else { panic!() };
                assert_eq!(*y, net.apply_update(*w, &x).unwrap());
            }
            let distinct: BTreeSet<_> = arcs.iter().map(|a| a.1).filter(|y| *y != x).collect();
            let succ: BTreeSet<_> = g
                .successors(x.bits() as u32)
                .into_iter()
                .map(|v| g.config(v))
                .collect();
            assert_eq!(distinct, succ);
        }
    }

    #[test]
    fn parts_merge_to_the_sequential_build() {
        let net = fig1();
        let mode = UpdateMode::BlockSequential(BlockPartition::parse(3, "2|0,1").unwrap());
        let whole = build_transition_graph(&net, &mode, Caps::default()).unwrap();
        let parts = [0..3u64, 3..5, 5..8]
            .into_iter()
            .map(|r| TransitionGraph::compute_part(&net, &mode, r))
            .collect();
        assert_eq!(TransitionGraph::from_parts(3, mode, parts).unwrap(), whole);
    }

    #[test]
    fn caps_are_enforced() {
        let net = BooleanNetwork::parse(&["x0"; 15]).unwrap();
        let err =
            build_transition_graph(&net, &UpdateMode::Elementary, Caps::default()).unwrap_err();
        assert_eq!(err, Error::CapExceeded { n: 15, cap: 14 });
        assert!(build_transition_graph(&net, &UpdateMode::Asynchronous, Caps::default()).is_ok());
        assert!(build_transition_graph(&net, &UpdateMode::Parallel, Caps::uniform(10)).is_err());
        let wrong = UpdateMode::BlockSequential(BlockPartition::sweep(3));
        assert!(build_transition_graph(&net, &wrong, Caps::default()).is_err());
    }
}
