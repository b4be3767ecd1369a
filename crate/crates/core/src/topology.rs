//! Canonical cycles, canonical double-cycles and tangential double-cycles.
//!
//! Double-cycle indexing: the left cycle is `0..l`, automaton `k` of the
//! right cycle (`k ≥ 1`) is global automaton `l - 1 + k`, and automaton 0 is
//! the unique shared automaton. A cycle of size 1 is a self-loop on 0.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::config::{Configuration, MAX_WIDTH};
use crate::digraph::Sign;
use crate::dynamics::{attractors, build_transition_graph, Caps, TransitionGraph, UpdateMode};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::network::BooleanNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleDescriptor {
    pub n: usize,
    pub sign: Sign,
}

impl CycleDescriptor {
    pub fn new(n: usize, sign: Sign) -> Result<Self> {
        if n == 0 || n > MAX_WIDTH {
            return Err(Error::InvalidDescriptor(alloc::format!("cycle size {n}")));
        }
        Ok(Self { n, sign })
    }
}

/// The junction operator `◇` combining both inputs of automaton 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Junction {
    And,
    Or,
}

impl Junction {
    pub fn dual(self) -> Junction {
        match self {
            Junction::And => Junction::Or,
            Junction::Or => Junction::And,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Junction::And => "and",
            Junction::Or => "or",
        }
    }

    #[inline]
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Junction::And => a && b,
            Junction::Or => a || b,
        }
    }
}

/// Sign pattern of a double-cycle, left cycle first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DoubleSigns {
    Positive,
    Mixed,
    Negative,
}

impl DoubleSigns {
    pub const ALL: [DoubleSigns; 3] = [
        DoubleSigns::Positive,
        DoubleSigns::Mixed,
        DoubleSigns::Negative,
    ];

    pub fn left(self) -> Sign {
        match self {
            DoubleSigns::Positive => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn right(self) -> Sign {
        match self {
            DoubleSigns::Negative => Sign::Negative,
            _ => Sign::Positive,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            DoubleSigns::Positive => "++",
            DoubleSigns::Mixed => "-+",
            DoubleSigns::Negative => "--",
        }
    }
}

/// Which of the two cycles of a double-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DoubleCycleDescriptor {
    pub l: usize,
    pub r: usize,
    pub signs: DoubleSigns,
    pub junction: Junction,
}

impl DoubleCycleDescriptor {
    pub fn new(l: usize, r: usize, signs: DoubleSigns, junction: Junction) -> Result<Self> {
        if l == 0 || r == 0 || l + r - 1 > MAX_WIDTH {
            return Err(Error::InvalidDescriptor(alloc::format!(
                "double-cycle sizes {l},{r}"
            )));
        }
        Ok(Self {
            l,
            r,
            signs,
            junction,
        })
    }

    /// Network size `l + r - 1`.
    pub fn n(&self) -> usize {
        self.l + self.r - 1
    }

    /// `Δ = gcd(l, r)`.
    pub fn delta(&self) -> usize {
        self.l.gcd(&self.r)
    }

    /// `Δ_p = gcd(Δ, p)`.
    pub fn delta_p(&self, p: usize) -> usize {
        self.delta().gcd(&p)
    }

    pub fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.l,
            Side::Right => self.r,
        }
    }

    pub fn sign(&self, side: Side) -> Sign {
        match side {
            Side::Left => self.signs.left(),
            Side::Right => self.signs.right(),
        }
    }

    /// Global automaton of local position `k` on `side`.
    #[inline]
    pub fn global(&self, side: Side, k: usize) -> usize {
        match (side, k) {
            (_, 0) => 0,
            (Side::Left, k) => k,
            (Side::Right, k) => self.l - 1 + k,
        }
    }

    /// The automaton feeding automaton 0 from `side`.
    pub fn junction_input(&self, side: Side) -> usize {
        let size = self.size(side);
        if size == 1 {
            0
        } else {
            self.global(side, size - 1)
        }
    }

    pub fn with_junction(self, junction: Junction) -> Self {
        Self { junction, ..self }
    }
}

/// Any network family with closed-form combinatorics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Cycle(CycleDescriptor),
    DoubleCycle(DoubleCycleDescriptor),
}

impl Descriptor {
    pub fn n(&self) -> usize {
        match self {
            Descriptor::Cycle(c) => c.n,
            Descriptor::DoubleCycle(d) => d.n(),
        }
    }

    pub fn network(&self) -> BooleanNetwork {
        match self {
            Descriptor::Cycle(c) => canonical_cycle(*c),
            Descriptor::DoubleCycle(d) => canonical_double_cycle(*d),
        }
    }

    /// Parses `C+:n`, `C-:n`, `D++:l,r:or`, `D-+:l,r:and`, `D--:l,r:and`.
    /// The junction may be omitted, in which case `default_junction` is used.
    pub fn parse(s: &str, default_junction: Junction) -> Result<Self> {
        let bad = |why: &str| Error::InvalidDescriptor(alloc::format!("`{s}`: {why}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<usize> {
            t.trim()
                .parse::<usize>()
                .map_err(|_| bad("sizes must be positive integers"))
        };
        match parts.as_slice() {
            [kind @ ("C+" | "C-"), n] => {
                let sign = if *kind == "C+" {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                Ok(Descriptor::Cycle(CycleDescriptor::new(num(n)?, sign)?))
            }
            [kind @ ("D++" | "D-+" | "D--"), sizes, rest @ ..] if rest.len() <= 1 => {
                let signs = match *kind {
                    "D++" => DoubleSigns::Positive,
                    "D-+" => DoubleSigns::Mixed,
                    _ => DoubleSigns::Negative,
                };
                let (l, r) = sizes.split_once(',').ok_or_else(|| bad("expected `l,r`"))?;
                let junction = match rest.first().map(|j| j.trim()) {
                    None => default_junction,
                    Some("and") => Junction::And,
                    Some("or") => Junction::Or,
                    Some(_) => return Err(bad("junction must be `and` or `or`")),
                };
                Ok(Descriptor::DoubleCycle(DoubleCycleDescriptor::new(
                    num(l)?,
                    num(r)?,
                    signs,
                    junction,
                )?))
            }
            _ => Err(bad("unknown descriptor kind")),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Cycle(c) => write!(f, "C{}:{}", c.sign.symbol(), c.n),
            Descriptor::DoubleCycle(d) => {
                write!(
                    f,
                    "D{}:{},{}:{}",
                    d.signs.tag(),
                    d.l,
                    d.r,
                    d.junction.name()
                )
            }
        }
    }
}

impl From<CycleDescriptor> for Descriptor {
    fn from(c: CycleDescriptor) -> Self {
        Descriptor::Cycle(c)
    }
}

impl From<DoubleCycleDescriptor> for Descriptor {
    fn from(d: DoubleCycleDescriptor) -> Self {
        Descriptor::DoubleCycle(d)
    }
}

/// `f_i = x_{i-1}`, except `f_0 = ¬x_{n-1}` for a negative cycle.
pub fn canonical_cycle(desc: CycleDescriptor) -> BooleanNetwork {
    let n = desc.n;
    let exprs = (0..n)
        .map(|i| {
            let pred = (i + n - 1) % n;
            Expr::literal(pred, i == 0 && desc.sign == Sign::Negative)
        })
        .collect();
    BooleanNetwork::from_exprs(exprs).expect("canonical cycle is well formed")
}

/// `f_0 = (±x_{l-1}) ◇ (±x_{n-1})`; every other automaton copies its predecessor.
pub fn canonical_double_cycle(desc: DoubleCycleDescriptor) -> BooleanNetwork {
    let n = desc.n();
    let mut exprs = Vec::with_capacity(n);
    let left = Expr::literal(
        desc.junction_input(Side::Left),
        desc.signs.left() == Sign::Negative,
    );
    let right = Expr::literal(
        desc.junction_input(Side::Right),
        desc.signs.right() == Sign::Negative,
    );
    exprs.push(match desc.junction {
        Junction::And => Expr::and(left, right),
        Junction::Or => Expr::or(left, right),
    });
    for k in 1..desc.l {
        exprs.push(Expr::var(desc.global(Side::Left, k - 1)));
    }
    for k in 1..desc.r {
        exprs.push(Expr::var(desc.global(Side::Right, k - 1)));
    }
    BooleanNetwork::from_exprs(exprs).expect("canonical double-cycle is well formed")
}

/// Two cycles sharing an isolated path of `m` automata: the first path
/// automaton has arity 2, the others arity 1.
///
/// `l` and `r` count each cycle's automata outside the duplicable part of the
/// path (cycle size minus `m - 1`), so `m = 1` is exactly `D_{l,r}`. Network
/// layout: path `0..m`, then `l - 1` left-private automata, then `r - 1`
/// right-private ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentialDescriptor {
    pub l: usize,
    pub r: usize,
    pub m: usize,
    pub signs: DoubleSigns,
    pub junction: Junction,
}

impl TangentialDescriptor {
    pub fn new(
        l: usize,
        r: usize,
        m: usize,
        signs: DoubleSigns,
        junction: Junction,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDescriptor(String::from(
                "shared path length must be ≥ 1",
            )));
        }
        if l == 0 || r == 0 || l + r + m - 2 > MAX_WIDTH {
            return Err(Error::InvalidDescriptor(alloc::format!(
                "tangential sizes {l},{r},{m}"
            )));
        }
        Ok(Self {
            l,
            r,
            m,
            signs,
            junction,
        })
    }

    pub fn n(&self) -> usize {
        self.l + self.r + self.m - 2
    }

    /// Global indices of one branch: path tail first, then the private chain.
    fn branch(&self, side: Side) -> Vec<usize> {
        let private = match side {
            Side::Left => self.m..self.m + self.l - 1,
            Side::Right => self.m + self.l - 1..self.n(),
        };
        (1..self.m).chain(private).collect()
    }

    pub fn network(&self) -> BooleanNetwork {
        let n = self.n();
        let mut exprs: Vec<Option<Expr>> = (0..n).map(|_| None).collect();
        for (k, e) in exprs.iter_mut().enumerate().take(self.m).skip(1) {
            *e = Some(Expr::var(k - 1));
        }
        let mut inputs = [0usize; 2];
        for (slot, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            let chain = self.branch(side);
            let mut prev = self.m - 1;
            for &v in &chain[self.m - 1..] {
                exprs[v] = Some(Expr::var(prev));
                prev = v;
            }
            inputs[slot] = prev;
        }
        let left = Expr::literal(inputs[0], self.signs.left() == Sign::Negative);
        let right = Expr::literal(inputs[1], self.signs.right() == Sign::Negative);
        exprs[0] = Some(match self.junction {
            Junction::And => Expr::and(left, right),
            Junction::Or => Expr::or(left, right),
        });
        BooleanNetwork::from_exprs(
            exprs
                .into_iter()
                .map(|e| e.expect("every automaton defined"))
                .collect(),
        )
        .expect("tangential double-cycle is well formed")
    }

    /// Maps a configuration of this network to the canonical double-cycle by
    /// copying every duplicated path automaton into both cycles.
    pub fn duplicate(&self, y: &Configuration) -> Configuration {
        let target = canonicalize_tangential(*self);
        let mut x = Configuration::zeros(target.n()).expect("width checked at construction");
        x.set(0, y.get(0));
        for side in [Side::Left, Side::Right] {
            for (k, &v) in self.branch(side).iter().enumerate() {
                x.set(target.global(side, k + 1), y.get(v));
            }
        }
        x
    }
}

/// The canonical double-cycle equivalent to a tangential double-cycle:
/// both cycles grow by `m - 1`, signs and junction are kept.
pub fn canonicalize_tangential(t: TangentialDescriptor) -> DoubleCycleDescriptor {
    DoubleCycleDescriptor {
        l: t.l + t.m - 1,
        r: t.r + t.m - 1,
        signs: t.signs,
        junction: t.junction,
    }
}

/// Checks that the duplication map conjugates the two parallel dynamics and
/// carries the source's recurring configurations onto the target's.
pub fn check_tangential_equivalence(t: TangentialDescriptor, caps: Caps) -> Result<bool> {
    let source = t.network();
    let target_desc = canonicalize_tangential(t);
    let target = canonical_double_cycle(target_desc);
    let gs = build_transition_graph(&source, &UpdateMode::Parallel, caps)?;
    let gt = build_transition_graph(&target, &UpdateMode::Parallel, caps)?;
    for y in Configuration::all(t.n()) {
        if t.duplicate(&source.parallel_step(&y)) != target.parallel_step(&t.duplicate(&y)) {
            return Ok(false);
        }
    }
    let mut rec_source: Vec<Configuration> = attractors(&gs)
        .attractors
        .iter()
        .flat_map(|a| a.states.iter().map(|y| t.duplicate(y)))
        .collect();
    let mut rec_target: Vec<Configuration> = attractors(&gt)
        .attractors
        .into_iter()
        .flat_map(|a| a.states)
        .collect();
    rec_source.sort();
    rec_target.sort();
    Ok(rec_source == rec_target)
}

/// Whether complementing every configuration maps the `∧`-junction
/// transition graph onto the `∨`-junction one, arc labels included.
pub fn check_and_or_duality(
    l: usize,
    r: usize,
    signs: DoubleSigns,
    mode: &UpdateMode,
    caps: Caps,
) -> Result<bool> {
    let and = DoubleCycleDescriptor::new(l, r, signs, Junction::And)?;
    let g_and = build_transition_graph(&canonical_double_cycle(and), mode, caps)?;
    let g_or = build_transition_graph(
        &canonical_double_cycle(and.with_junction(Junction::Or)),
        mode,
        caps,
    )?;
    Ok(complement_is_isomorphism(&g_and, &g_or))
}

fn complement_is_isomorphism(a: &TransitionGraph, b: &TransitionGraph) -> bool {
    let n = a.n();
    if n != b.n() {
        return false;
    }
    Configuration::all(n).all(|x| {
        let xa = a.labeled_arcs(&x);
        let mut xb = b.labeled_arcs(&x.complement());
        let mut mapped: Vec<_> = xa
            .into_iter()
            .map(|(lab, y)| (lab, y.complement()))
            .collect();
        mapped.sort();
        xb.sort();
        mapped == xb
    })
}

impl fmt::Display for TangentialDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T{}:{},{},{}:{}",
            self.signs.tag(),
            self.l,
            self.r,
            self.m,
            self.junction.name()
        )
    }
}

impl DoubleCycleDescriptor {
    pub fn label(&self) -> String {
        Descriptor::DoubleCycle(*self).to_string()
    }
}
