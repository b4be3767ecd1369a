use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::config::{AutomatonSet, Configuration};
use crate::error::{Error, Result};
use crate::network::BooleanNetwork;

/// An ordered partition of the automata, swept block by block in one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    blocks: Vec<AutomatonSet>,
}

impl BlockPartition {
    /// Validates that `blocks` are nonempty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = 0u64;
        let mut sets = Vec::with_capacity(blocks.len());
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition(String::from("empty block")));
            }
            let mut set = 0u64;
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "automaton {i} outside 0..{n}"
                    )));
                }
                if (seen | set) >> i & 1 == 1 {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "automaton {i} appears twice"
                    )));
                }
                set |= 1 << i;
            }
            seen |= set;
            sets.push(AutomatonSet::from_mask(set));
        }
        if seen != AutomatonSet::all(n).mask() {
            let missing = (0..n).find(|&i| seen >> i & 1 == 0).unwrap_or(0);
            return Err(Error::InvalidPartition(alloc::format!(
                "automaton {missing} is not covered"
            )));
        }
        Ok(Self { n, blocks: sets })
    }

    /// Parses `"0,1|2"`: blocks separated by `|`, members by `,`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let mut block = Vec::new();
            for item in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                block.push(item.parse::<usize>().map_err(|_| {
                    Error::InvalidPartition(alloc::format!("`{item}` is not an automaton index"))
                })?);
            }
            blocks.push(block);
        }
        Self::new(n, blocks)
    }

    /// The single block `{V}`.
    pub fn parallel(n: usize) -> Self {
        Self {
            n,
            blocks: alloc::vec![AutomatonSet::all(n)],
        }
    }

    /// Singletons in order `0, 1, …, n-1`.
    pub fn sweep(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(AutomatonSet::singleton).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[AutomatonSet] {
        &self.blocks
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (m, i) in b.iter().enumerate() {
                if m > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpdateMode {
    Parallel,
    Asynchronous,
    Elementary,
    BlockSequential(BlockPartition),
}

impl UpdateMode {
    /// Parallel and block-sequential graphs are functional.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, UpdateMode::Parallel | UpdateMode::BlockSequential(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            UpdateMode::Parallel => "parallel",
            UpdateMode::Asynchronous => "asynchronous",
            UpdateMode::Elementary => "elementary",
            UpdateMode::BlockSequential(_) => "block-sequential",
        }
    }

    /// One deterministic step; `None` for nondeterministic modes.
    pub fn step(&self, net: &BooleanNetwork, x: &Configuration) -> Option<Configuration> {
        match self {
            UpdateMode::Parallel => Some(net.parallel_step(x)),
            UpdateMode::BlockSequential(p) => Some(p.blocks.iter().fold(*x, |y, &b| {
                y.flip(AutomatonSet::from_mask(
                    b.mask() & net.unstable_set(&y).mask(),
                ))
            })),
            _ => None,
        }
    }
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateMode::BlockSequential(p) => write!(f, "block-sequential({p})"),
            other => f.write_str(other.name()),
        }
    }
}
