//! Configurations and automaton sets.
//!
//! Both are fixed-width bit vectors over at most 64 automata. Automaton `i`
//! lives in bit `i` of the packed word, so the packed word doubles as the
//! vertex index of a transition graph. Textual forms put automaton 0 first.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 64;

#[inline]
pub(crate) fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// One Boolean state per automaton.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Configuration {
    n: u8,
    bits: u64,
}

impl Configuration {
    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_bits(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::from_bits(n, width_mask(n))
    }

    /// Builds a configuration from a packed word; bits beyond `n` must be clear.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_WIDTH {
            return Err(Error::TooWide(n));
        }
        if bits & !width_mask(n) != 0 {
            return Err(Error::WidthMismatch {
                expected: n,
                got: 64 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self { n: n as u8, bits })
    }

    /// Unchecked constructor for hot enumeration loops.
    #[inline]
    pub(crate) fn raw(n: usize, bits: u64) -> Self {
        debug_assert!(n <= MAX_WIDTH && bits & !width_mask(n) == 0);
        Self { n: n as u8, bits }
    }

    pub fn from_states(states: &[bool]) -> Result<Self> {
        if states.len() > MAX_WIDTH {
            return Err(Error::TooWide(states.len()));
        }
        let bits = states
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Ok(Self::raw(states.len(), bits))
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width());
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.width());
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn with(mut self, i: usize, value: bool) -> Self {
        self.set(i, value);
        self
    }

    /// `x̄^W`: every automaton of `w` negated.
    #[inline]
    pub fn flip(&self, w: AutomatonSet) -> Self {
        Self::raw(
            self.width(),
            self.bits ^ (w.mask() & width_mask(self.width())),
        )
    }

    #[inline]
    pub fn flip_one(&self, i: usize) -> Self {
        Self::raw(self.width(), self.bits ^ (1 << i))
    }

    /// Bitwise complement over the whole width.
    #[inline]
    pub fn complement(&self) -> Self {
        Self::raw(self.width(), !self.bits & width_mask(self.width()))
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn states(&self) -> Vec<bool> {
        (0..self.width()).map(|i| self.get(i)).collect()
    }

    /// Key ordering configurations as their binary words (automaton 0 most significant).
    pub fn lex_key(&self) -> u64 {
        let n = self.width();
        if n == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (64 - n)
        }
    }

    /// Iterates `B^n` in packed-word order.
    pub fn all(n: usize) -> impl Iterator<Item = Configuration> {
        assert!(n < 64, "cannot enumerate 2^{n} configurations");
        (0..1u64 << n).map(move |b| Configuration::raw(n, b))
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Configuration {
    /// Width first, then the binary word lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut states = Vec::with_capacity(s.len());
        for (col, ch) in s.chars().enumerate() {
            match ch {
                '0' => states.push(false),
                '1' => states.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        column: col + 1,
                        message: alloc::format!("expected '0' or '1', found {ch:?}"),
                    })
                }
            }
        }
        Self::from_states(&states)
    }
}

/// A set of automata, used as the update set `W`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AutomatonSet(u64);

impl AutomatonSet {
    pub const EMPTY: AutomatonSet = AutomatonSet(0);

    #[inline]
    pub fn from_mask(mask: u64) -> Self {
        Self(mask)
    }

    pub fn all(n: usize) -> Self {
        Self(width_mask(n))
    }

    pub fn singleton(i: usize) -> Self {
        Self(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Highest member plus one, 0 for the empty set.
    pub fn span(&self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (0..64).filter(move |&i| (mask >> i) & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{0,2}` style rendering.
    pub fn render(&self) -> String {
        let mut out = String::from("{");
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&alloc::format!("{i}"));
        }
        out.push('}');
        out
    }
}

impl fmt::Debug for AutomatonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
