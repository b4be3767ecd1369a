//! Boolean automata networks and their single-step semantics.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{AutomatonSet, Configuration, MAX_WIDTH};
use crate::digraph::{Sign, SignSet, SignedDigraph};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Supports wider than this are evaluated through the expression tree only.
const MAX_TABLE_ARITY: usize = 20;

/// Default bound on `n` for operations enumerating all of `B^n`.
pub const DEFAULT_INTERACTION_CAP: usize = 20;

/// A local transition function over a declared support.
///
/// Expression-built functions are compiled to a truth table indexed by the
/// support bits (support position `k` contributes bit `k` of the index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFunction {
    support: Vec<usize>,
    table: Option<Vec<u64>>,
    expr: Option<Expr>,
}

impl LocalFunction {
    pub fn from_expr(expr: Expr) -> Self {
        let support = expr.variables();
        let table = (support.len() <= MAX_TABLE_ARITY).then(|| {
            let rows = 1usize << support.len();
            let mut table = vec![0u64; rows.div_ceil(64)];
            for row in 0..rows {
                let value = expr.eval_with(&|var| {
                    let k = support.binary_search(&var).expect("variable in support");
                    (row >> k) & 1 == 1
                });
                if value {
                    table[row / 64] |= 1 << (row % 64);
                }
            }
            table
        });
        Self {
            support,
            table,
            expr: Some(expr),
        }
    }

    /// Builds a function from explicit truth-table rows; `rows[k]` is the
    /// output when the support bits, read as a little-endian integer, equal `k`.
    pub fn from_table(support: Vec<usize>, rows: &[bool]) -> Result<Self> {
        let arity = support.len();
        if arity > MAX_TABLE_ARITY {
            return Err(Error::TooWide(arity));
        }
        if rows.len() != 1 << arity {
            return Err(Error::WidthMismatch {
                expected: 1 << arity,
                got: rows.len(),
            });
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != arity {
            return Err(Error::InvalidDescriptor(alloc::format!(
                "duplicate variable in support {support:?}"
            )));
        }
        let mut table = vec![0u64; rows.len().div_ceil(64)];
        for (row, &v) in rows.iter().enumerate() {
            if v {
                table[row / 64] |= 1 << (row % 64);
            }
        }
        Ok(Self {
            support,
            table: Some(table),
            expr: None,
        })
    }

    pub fn constant(value: bool) -> Self {
        Self::from_expr(Expr::Const(value))
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }

    #[inline]
    pub fn eval(&self, x: &Configuration) -> bool {
        match &self.table {
            Some(table) => {
                let mut row = 0usize;
                for (k, &var) in self.support.iter().enumerate() {
                    row |= ((x.bits() >> var) as usize & 1) << k;
                }
                (table[row / 64] >> (row % 64)) & 1 == 1
            }
            None => self
                .expr
                .as_ref()
                .expect("table-less functions keep their expression")
                .eval(x),
        }
    }
}

/// An ordered set of `n` local transition functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanNetwork {
    locals: Vec<LocalFunction>,
}

impl BooleanNetwork {
    pub fn new(locals: Vec<LocalFunction>) -> Result<Self> {
        let n = locals.len();
        if n > MAX_WIDTH {
            return Err(Error::TooWide(n));
        }
        for f in &locals {
            if let Some(&bad) = f.support.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
        }
        Ok(Self { locals })
    }

    pub fn from_exprs(exprs: Vec<Expr>) -> Result<Self> {
        Self::new(exprs.into_iter().map(LocalFunction::from_expr).collect())
    }

    /// Parses one expression per automaton. Parse errors report the line of
    /// the offending entry.
    pub fn parse<S: AsRef<str>>(sources: &[S]) -> Result<Self> {
        let mut exprs = Vec::with_capacity(sources.len());
        for (k, src) in sources.iter().enumerate() {
            match Expr::parse(src.as_ref()) {
                Ok(e) => exprs.push(e),
                Err(Error::Parse {
                    line,
                    column,
                    message,
                }) => {
                    return Err(Error::Parse {
                        line: k + line,
                        column,
                        message,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        Self::from_exprs(exprs)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.locals.len()
    }

    pub fn local(&self, i: usize) -> &LocalFunction {
        &self.locals[i]
    }

    pub fn locals(&self) -> &[LocalFunction] {
        &self.locals
    }

    fn check_width(&self, x: &Configuration) -> Result<()> {
        if x.width() != self.n() {
            return Err(Error::WidthMismatch {
                expected: self.n(),
                got: x.width(),
            });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `f_i(x)`.
    pub fn eval_local(&self, i: usize, x: &Configuration) -> Result<bool> {
        self.check_index(i)?;
        self.check_width(x)?;
        Ok(self.locals[i].eval(x))
    }

    /// `F_W(x)`: automata in `w` take `f_i(x)`, all read from the same `x`.
    pub fn apply_update(&self, w: AutomatonSet, x: &Configuration) -> Result<Configuration> {
        if w.is_empty() {
            return Err(Error::EmptyUpdateSet);
        }
        if w.span() > self.n() {
            return Err(Error::IndexOutOfRange {
                index: w.span() - 1,
                n: self.n(),
            });
        }
        self.check_width(x)?;
        Ok(x.flip(AutomatonSet::from_mask(
            w.mask() & self.unstable_set(x).mask(),
        )))
    }

    /// Automata whose local function disagrees with their current state.
    #[inline]
    pub fn unstable_set(&self, x: &Configuration) -> AutomatonSet {
        let mut mask = 0u64;
        for (i, f) in self.locals.iter().enumerate() {
            if f.eval(x) != x.get(i) {
                mask |= 1 << i;
            }
        }
        AutomatonSet::from_mask(mask)
    }

    /// The parallel map `F_V`.
    #[inline]
    pub fn parallel_step(&self, x: &Configuration) -> Configuration {
        x.flip(self.unstable_set(x))
    }

    pub fn is_fixed_point(&self, x: &Configuration) -> bool {
        self.unstable_set(x).is_empty()
    }

    /// `sign_x(i, j) = s(x_i) * (f_j(x) - f_j(x̄^{i}))` with `s(b) = b - ¬b`.
    pub fn interaction_sign(&self, x: &Configuration, i: usize, j: usize) -> Result<i8> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_width(x)?;
        Ok(self.sign_unchecked(x, i, j))
    }

    #[inline]
    fn sign_unchecked(&self, x: &Configuration, i: usize, j: usize) -> i8 {
        let s = if x.get(i) { 1 } else { -1 };
        let here = self.locals[j].eval(x) as i8;
        let there = self.locals[j].eval(&x.flip_one(i)) as i8;
        s * (here - there)
    }

    /// Every `(i, j, σ)` realised by some configuration, both signs kept.
    pub fn interaction_multigraph(&self, cap: usize) -> Result<SignedDigraph> {
        let n = self.n();
        if n > cap || n >= 64 {
            return Err(Error::CapExceeded { n, cap });
        }
        let mut seen = vec![SignSet::default(); n * n];
        for x in Configuration::all(n) {
            for j in 0..n {
                // only support variables can have a nonzero sign
                for &i in self.locals[j].support() {
                    match self.sign_unchecked(&x, i, j) {
                        1 => seen[i * n + j].positive = true,
                        -1 => seen[i * n + j].negative = true,
                        _ => {}
                    }
                }
            }
        }
        let mut g = SignedDigraph::empty(n);
        for i in 0..n {
            for j in 0..n {
                let s = seen[i * n + j];
                if s.positive {
                    g.add_arc(i, j, Sign::Positive);
                }
                if s.negative {
                    g.add_arc(i, j, Sign::Negative);
                }
            }
        }
        Ok(g)
    }

    /// The simple signed interaction graph `G = (V, E)`.
    pub fn interaction_graph(&self, cap: usize) -> Result<SignedDigraph> {
        let g = self.interaction_multigraph(cap)?;
        if let Some((i, j)) = g.first_non_simple_pair() {
            return Err(Error::NonSimpleInteraction {
                source_automaton: i,
                target: j,
            });
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> BooleanNetwork {
        BooleanNetwork::parse(&[
            "x0 or not x1",
            "not x0 or not x1 or x2",
            "not x0 or not x1 or not x2",
        ])
        .unwrap()
    }

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn eval_local_examples() {
        let net = fig1();
        assert!(net.eval_local(0, &cfg("000")).unwrap());
        assert!(matches!(
            net.eval_local(3, &cfg("000")),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
        assert!(matches!(
            net.eval_local(0, &cfg("00")),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn apply_update_examples() {
        let net = fig1();
        let all = AutomatonSet::all(3);
        assert_eq!(net.apply_update(all, &cfg("000")).unwrap(), cfg("111"));
        assert_eq!(
            net.apply_update(AutomatonSet::singleton(1), &cfg("000"))
                .unwrap(),
            cfg("010")
        );
        for w in 1..8 {
            let w = AutomatonSet::from_mask(w);
            assert_eq!(net.apply_update(w, &cfg("011")).unwrap(), cfg("011"));
        }
        assert_eq!(
            net.apply_update(AutomatonSet::EMPTY, &cfg("011")),
            Err(Error::EmptyUpdateSet)
        );
        assert!(net
            .apply_update(AutomatonSet::singleton(3), &cfg("011"))
            .is_err());
    }

    #[test]
    fn interaction_sign_examples() {
        let net = fig1();
        assert_eq!(net.interaction_sign(&cfg("010"), 0, 0).unwrap(), 1);
        let c2 = BooleanNetwork::parse(&["not x1", "x0"]).unwrap();
        assert_eq!(c2.interaction_sign(&cfg("00"), 1, 0).unwrap(), -1);
        let consts = BooleanNetwork::parse(&["1", "0"]).unwrap();
        for x in Configuration::all(2) {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(consts.interaction_sign(&x, i, j).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn figure_one_interaction_graph_has_eight_arcs() {
        let g = fig1().interaction_graph(DEFAULT_INTERACTION_CAP).unwrap();
        let arcs = g.arcs();
        assert_eq!(arcs.len(), 8);
        use Sign::*;
        let expected = [
            (0, 0, Positive),
            (0, 1, Negative),
            (0, 2, Negative),
            (1, 0, Negative),
            (1, 1, Negative),
            (1, 2, Negative),
            (2, 1, Positive),
            (2, 2, Negative),
        ];
        assert_eq!(arcs, expected.to_vec());
    }

    #[test]
    fn constant_network_has_no_arcs() {
        let net = BooleanNetwork::parse(&["0", "1", "1"]).unwrap();
        assert!(net.interaction_graph(20).unwrap().arcs().is_empty());
    }

    #[test]
    fn non_simple_pair_is_rejected() {
        // x0 xor x1 realises both signs on (0, 1) and (1, 1)
        let net = BooleanNetwork::parse(&["x0", "(x0 and not x1) or (not x0 and x1)"]).unwrap();
        assert!(matches!(
            net.interaction_graph(20),
            Err(Error::NonSimpleInteraction { .. })
        ));
        let multi = net.interaction_multigraph(20).unwrap();
        assert!(multi.first_non_simple_pair().is_some());
    }

    #[test]
    fn cap_is_enforced() {
        let net = BooleanNetwork::from_exprs((0..5).map(Expr::var).collect()).unwrap();
        assert_eq!(
            net.interaction_graph(4),
            Err(Error::CapExceeded { n: 5, cap: 4 })
        );
    }

    #[test]
    fn out_of_range_variable_is_rejected() {
        assert!(matches!(
            BooleanNetwork::parse(&["x2", "x0"]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn parse_error_reports_entry_line() {
        match BooleanNetwork::parse(&["x0", "x1 and", "x0"]) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn table_and_expression_agree() {
        let f = LocalFunction::from_table(vec![2, 0], &[false, true, true, false]).unwrap();
        let g =
            LocalFunction::from_expr(Expr::parse("(x2 and not x0) or (x0 and not x2)").unwrap());
        for x in Configuration::all(3) {
            assert_eq!(f.eval(&x), g.eval(&x), "{x}");
        }
    }

    #[test]
    fn evaluation_depends_only_on_support() {
        let net = fig1();
        let parity = BooleanNetwork::parse(&["x3", "x0 and x2", "not x1", "x2 or x0"]).unwrap();
        for net in [net, parity] {
            let n = net.n();
            for (i, f) in net.locals().iter().enumerate() {
                for x in Configuration::all(n) {
                    for k in (0..n).filter(|k| !f.support().contains(k)) {
                        assert_eq!(f.eval(&x), f.eval(&x.flip_one(k)), "f_{i} at {x}, bit {k}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn apply_update_is_local(bits in 0u64..8, w in 1u64..8) {
            let net = fig1();
            let x = Configuration::from_bits(3, bits).unwrap();
            let w = AutomatonSet::from_mask(w);
            let y = net.apply_update(w, &x).unwrap();
            for i in 0..3 {
                if w.contains(i) {
                    prop_assert_eq!(y.get(i), net.eval_local(i, &x).unwrap());
                } else {
                    prop_assert_eq!(y.get(i), x.get(i));
                }
            }
        }

        #[test]
        fn flipping_the_source_preserves_the_sign(bits in 0u64..8, i in 0usize..3, j in 0usize..3) {
            // s(x_i) and the difference both change sign, so the product does not
            let net = fig1();
            let x = Configuration::from_bits(3, bits).unwrap();
            let a = net.interaction_sign(&x, i, j).unwrap();
            let b = net.interaction_sign(&x.flip_one(i), i, j).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn parallel_map_fixes_its_fixed_points() {
        let net = fig1();
        for x in Configuration::all(3) {
            if net.parallel_step(&x) == x {
                assert_eq!(net.apply_update(AutomatonSet::all(3), &x).unwrap(), x);
            }
        }
    }
}
