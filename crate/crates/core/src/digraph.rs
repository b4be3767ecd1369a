//! Signed interaction graphs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// Signs observed on one ordered pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SignSet {
    pub positive: bool,
    pub negative: bool,
}

impl SignSet {
    pub fn is_empty(&self) -> bool {
        !self.positive && !self.negative
    }

    fn iter(&self) -> impl Iterator<Item = Sign> {
        let (p, n) = (self.positive, self.negative);
        [(p, Sign::Positive), (n, Sign::Negative)]
            .into_iter()
            .filter_map(|(on, s)| on.then_some(s))
    }
}

/// Directed graph on `0..n` whose arcs carry one or both signs.
///
/// Graphs returned by `BooleanNetwork::interaction_graph` are simple: each
/// ordered pair carries exactly one sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedDigraph {
    n: usize,
    arcs: BTreeMap<(usize, usize), SignSet>,
}

impl SignedDigraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            arcs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, source: usize, target: usize, sign: Sign) {
        let entry = self.arcs.entry((source, target)).or_default();
        match sign {
            Sign::Positive => entry.positive = true,
            Sign::Negative => entry.negative = true,
        }
    }

    pub fn arc(&self, source: usize, target: usize) -> Option<SignSet> {
        self.arcs.get(&(source, target)).copied()
    }

    /// All `(source, target, sign)` triples in ascending order.
    pub fn arcs(&self) -> Vec<(usize, usize, Sign)> {
        self.arcs
            .iter()
            .flat_map(|(&(i, j), s)| s.iter().map(move |sign| (i, j, sign)))
            .collect()
    }

    pub fn first_non_simple_pair(&self) -> Option<(usize, usize)> {
        self.arcs
            .iter()
            .find(|(_, s)| s.positive && s.negative)
            .map(|(&k, _)| k)
    }

    pub fn in_degree(&self, target: usize) -> usize {
        self.arcs.keys().filter(|&&(_, j)| j == target).count()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, SignSet)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(i, j), &s) in &self.arcs {
            adj[i].push((j, s));
        }
        adj
    }

    /// Whether any directed cycle (self-loops included) exists.
    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm: a cycle remains iff some vertex is never freed.
        let adj = self.adjacency();
        let mut indeg = vec![0usize; self.n];
        for &(_, j) in self.arcs.keys() {
            indeg[j] += 1;
        }
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut freed = 0;
        while let Some(v) = queue.pop() {
            freed += 1;
            for &(w, _) in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        freed < self.n
    }

    /// Whether some elementary cycle has the given sign (product of arc signs).
    ///
    /// Enumerates elementary cycles rooted at their least vertex, so it is
    /// exponential in the worst case; intended for the small graphs the
    /// property suites draw.
    pub fn has_cycle_with_sign(&self, wanted: Sign) -> bool {
        let adj = self.adjacency();
        let mut on_path = vec![false; self.n];
        (0..self.n).any(|root| {
            on_path[root] = true;
            let found = search(&adj, root, root, Sign::Positive, wanted, &mut on_path);
            on_path[root] = false;
            found
        })
    }
}

fn search(
    adj: &[Vec<(usize, SignSet)>],
    root: usize,
    v: usize,
    acc: Sign,
    wanted: Sign,
    on_path: &mut [bool],
) -> bool {
    for &(w, signs) in &adj[v] {
        if w < root {
            continue;
        }
        for s in signs.iter() {
            let acc = acc.times(s);
            if w == root {
                if acc == wanted {
                    return true;
                }
            } else if !on_path[w] {
                on_path[w] = true;
                let found = search(adj, root, w, acc, wanted, on_path);
                on_path[w] = false;
                if found {
                    return true;
                }
            }
        }
    }
    false
}
