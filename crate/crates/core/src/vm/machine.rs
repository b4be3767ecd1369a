use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::digraph::Sign;
use crate::error::{Error, Result};
use crate::topology::{DoubleCycleDescriptor, Side};

/// One instruction of the update language. Indices are local to the
/// addressed cycle, where local 0 is the shared automaton `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// `x_c ← f_c(x)`.
    Sync,
    Update(Side, usize),
    /// Updates `i, i+1, …, j`; empty when `j < i`.
    IncUp(Side, usize, usize),
    /// `IncUp(1, size-1)`.
    Erase(Side),
    /// `IncUp(1, κ-1)` with `κ` the first boundary that would be destroyed.
    Expand(Side),
    /// Updates `j, j-1, …, i`; empty when `j < i`.
    DecUp(Side, usize, usize),
    /// `DecUp(1, size-1)`.
    Shift(Side),
}

impl Instruction {
    pub fn name(&self) -> &'static str {
        match self {
            Instruction::Sync => "sync",
            Instruction::Update(..) => "update",
            Instruction::IncUp(..) => "incUp",
            Instruction::Erase(_) => "erase",
            Instruction::Expand(_) => "expand",
            Instruction::DecUp(..) => "decUp",
            Instruction::Shift(_) => "shift",
        }
    }

    pub fn cycle(&self) -> Option<Side> {
        match *self {
            Instruction::Sync => None,
            Instruction::Update(s, _)
            | Instruction::IncUp(s, ..)
            | Instruction::Erase(s)
            | Instruction::Expand(s)
            | Instruction::DecUp(s, ..)
            | Instruction::Shift(s) => Some(s),
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Instruction::Update(_, i) => alloc::vec![i],
            Instruction::IncUp(_, i, j) | Instruction::DecUp(_, i, j) => alloc::vec![i, j],
            _ => Vec::new(),
        }
    }

    /// Inverse of `name`, `cycle` and `indices`.
    pub fn from_parts(name: &str, cycle: Option<Side>, indices: &[usize]) -> Result<Self> {
        let bad = |why: &str| Error::Parse {
            line: 1,
            column: 1,
            message: alloc::format!("instruction `{name}`: {why}"),
        };
        let side = || cycle.ok_or_else(|| bad("missing cycle"));
        let arity = |k: usize| {
            if indices.len() == k {
                Ok(())
            } else {
                Err(bad("wrong number of indices"))
            }
        };
        Ok(match name {
            "sync" => {
                arity(0)?;
                if cycle.is_some() {
                    return Err(bad("sync takes no cycle"));
                }
                Instruction::Sync
            }
            "update" => {
                arity(1)?;
                Instruction::Update(side()?, indices[0])
            }
            "incUp" => {
                arity(2)?;
                Instruction::IncUp(side()?, indices[0], indices[1])
            }
            "decUp" => {
                arity(2)?;
                Instruction::DecUp(side()?, indices[0], indices[1])
            }
            "erase" | "expand" | "shift" => {
                arity(0)?;
                let s = side()?;
                match name {
                    "erase" => Instruction::Erase(s),
                    "expand" => Instruction::Expand(s),
                    _ => Instruction::Shift(s),
                }
            }
            _ => return Err(bad("unknown instruction")),
        })
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if let Some(side) = self.cycle() {
            write!(f, "({}", side.name())?;
            for i in self.indices() {
                write!(f, ",{i}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A single-automaton update performed by the machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub automaton: usize,
    pub before: Configuration,
    pub after: Configuration,
}

/// What one instruction did.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExecOutcome {
    pub updates: u64,
    /// `Expand` found no boundary to protect and did nothing.
    pub expand_noop: bool,
}

/// A canonical double-cycle under construction by update instructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VmState {
    desc: DoubleCycleDescriptor,
    x: Configuration,
    steps: u64,
    changes: u64,
}

impl VmState {
    pub fn new(desc: DoubleCycleDescriptor, x: Configuration) -> Result<Self> {
        if x.width() != desc.n() {
            return Err(Error::WidthMismatch {
                expected: desc.n(),
                got: x.width(),
            });
        }
        Ok(Self {
            desc,
            x,
            steps: 0,
            changes: 0,
        })
    }

    pub fn descriptor(&self) -> DoubleCycleDescriptor {
        self.desc
    }

    pub fn config(&self) -> Configuration {
        self.x
    }

    /// Single-automaton updates executed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Updates that changed a state.
    pub fn changes(&self) -> u64 {
        self.changes
    }

    pub fn size(&self, side: Side) -> usize {
        self.desc.size(side)
    }

    /// `x^m_k`.
    pub fn get(&self, side: Side, k: usize) -> bool {
        self.x.get(self.desc.global(side, k))
    }

    /// The word `x^m` read from `c` along the cycle.
    pub fn word(&self, side: Side) -> Vec<bool> {
        (0..self.size(side)).map(|k| self.get(side, k)).collect()
    }

    pub fn render_word(&self, side: Side) -> String {
        self.word(side)
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Circular `01` factors of `x^m`.
    pub fn cycle_expressiveness(&self, side: Side) -> u64 {
        let size = self.size(side);
        (0..size)
            .filter(|&k| !self.get(side, k) && self.get(side, (k + 1) % size))
            .count() as u64
    }

    pub fn expressiveness(&self) -> u64 {
        self.cycle_expressiveness(Side::Left) + self.cycle_expressiveness(Side::Right)
    }

    /// `f_c(x)`: signed inputs from both cycles combined by the junction.
    pub fn f_c(&self) -> bool {
        let input = |side| {
            let v = self.x.get(self.desc.junction_input(side));
            v ^ (self.desc.sign(side) == Sign::Negative)
        };
        self.desc
            .junction
            .apply(input(Side::Left), input(Side::Right))
    }

    fn write(&mut self, automaton: usize, value: bool, on_step: &mut dyn FnMut(Step)) {
        let before = self.x;
        self.x.set(automaton, value);
        self.steps += 1;
        if before != self.x {
            self.changes += 1;
        }
        on_step(Step {
            automaton,
            before,
            after: self.x,
        });
    }

    fn check_index(&self, side: Side, i: usize) -> Result<()> {
        let size = self.size(side);
        if i == 0 || i >= size {
            Err(Error::BadInstructionIndex { index: i, size })
        } else {
            Ok(())
        }
    }

    fn check_range(&self, side: Side, i: usize, j: usize) -> Result<bool> {
        if j < i {
            return Ok(false);
        }
        self.check_index(side, i)?;
        self.check_index(side, j)?;
        Ok(true)
    }

    fn update_unchecked(&mut self, side: Side, k: usize, on_step: &mut dyn FnMut(Step)) {
        let value = self.get(side, k - 1);
        self.write(self.desc.global(side, k), value, on_step);
    }

    /// `κ - 1` for `Expand`, or `None` when the min-set is empty.
    pub fn expand_reach(&self, side: Side) -> Option<usize> {
        let size = self.size(side);
        let c = self.get(side, 0);
        (1..size)
            .find(|&k| self.get(side, k) != c && self.get(side, (k + 1) % size) == c)
            .map(|kappa| kappa - 1)
    }

    /// Executes one instruction, reporting every single-automaton update.
    pub fn exec_with(
        &mut self,
        instr: Instruction,
        on_step: &mut dyn FnMut(Step),
    ) -> Result<ExecOutcome> {
        let before = self.steps;
        let mut expand_noop = false;
        match instr {
            Instruction::Sync => {
                let v = self.f_c();
                self.write(0, v, on_step);
            }
            Instruction::Update(side, i) => {
                self.check_index(side, i)?;
                self.update_unchecked(side, i, on_step);
            }
            Instruction::IncUp(side, i, j) => {
                if self.check_range(side, i, j)? {
                    for k in i..=j {
                        self.update_unchecked(side, k, on_step);
                    }
                }
            }
            Instruction::DecUp(side, i, j) => {
                if self.check_range(side, i, j)? {
                    for k in (i..=j).rev() {
                        self.update_unchecked(side, k, on_step);
                    }
                }
            }
            Instruction::Erase(side) => {
                return self.exec_with(Instruction::IncUp(side, 1, self.size(side) - 1), on_step);
            }
            Instruction::Shift(side) => {
                return self.exec_with(Instruction::DecUp(side, 1, self.size(side) - 1), on_step);
            }
            Instruction::Expand(side) => match self.expand_reach(side) {
                Some(j) => {
                    self.exec_with(Instruction::IncUp(side, 1, j), on_step)?;
                }
                None => expand_noop = true,
            },
        }
        Ok(ExecOutcome {
            updates: self.steps - before,
            expand_noop,
        })
    }

    pub fn exec_mut(&mut self, instr: Instruction) -> Result<ExecOutcome> {
        self.exec_with(instr, &mut |_| {})
    }
}

/// Value-style single instruction.
pub fn exec(mut state: VmState, instr: Instruction) -> Result<VmState> {
    state.exec_mut(instr)?;
    Ok(state)
}

/// Expressiveness of a state.
pub fn expressiveness(state: &VmState) -> u64 {
    state.expressiveness()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{DoubleSigns, Junction};
    use alloc::string::ToString;

    fn desc(l: usize, r: usize, signs: DoubleSigns) -> DoubleCycleDescriptor {
        DoubleCycleDescriptor::new(l, r, signs, Junction::And).unwrap()
    }

    fn state(l: usize, r: usize, x: &str) -> VmState {
        VmState::new(desc(l, r, DoubleSigns::Negative), x.parse().unwrap()).unwrap()
    }

    #[test]
    fn expressiveness_examples() {
        assert_eq!(state(2, 2, "000").expressiveness(), 0);
        assert_eq!(state(2, 2, "011").expressiveness(), 2);
        // ((01)^2, (01)^2): left 0101, right 0101
        assert_eq!(state(4, 4, "0101101").expressiveness(), 4);
        assert_eq!(state(1, 1, "1").expressiveness(), 0);
    }

    #[test]
    fn erase_propagates_c() {
        // left word 100 of D_{3,3}
        let mut s = state(3, 3, "10000");
        let out = s.exec_mut(Instruction::Erase(Side::Left)).unwrap();
        assert_eq!(s.render_word(Side::Left), "111");
        assert_eq!(out.updates, 2);
        assert_eq!(s.cycle_expressiveness(Side::Left), 0);
    }

    #[test]
    fn shift_takes_predecessors() {
        let mut s = state(3, 3, "10100");
        s.exec_mut(Instruction::Shift(Side::Left)).unwrap();
        assert_eq!(s.render_word(Side::Left), "110");
        assert_eq!(s.steps(), 2);
    }

    #[test]
    fn empty_ranges_and_bad_indices() {
        let mut s = state(3, 3, "10100");
        let out = s.exec_mut(Instruction::IncUp(Side::Left, 2, 1)).unwrap();
        assert_eq!((out.updates, s.config()), (0, "10100".parse().unwrap()));
        assert_eq!(
            s.exec_mut(Instruction::Update(Side::Right, 0)),
            Err(Error::BadInstructionIndex { index: 0, size: 3 })
        );
        assert_eq!(
            s.exec_mut(Instruction::IncUp(Side::Right, 1, 3)),
            Err(Error::BadInstructionIndex { index: 3, size: 3 })
        );
    }

    #[test]
    fn right_cycle_uses_local_coordinates() {
        // D_{2,3}: global 0 | 1 | 2 3, right word is x0 x2 x3
        let mut s = state(2, 3, "1000");
        s.exec_mut(Instruction::Update(Side::Right, 1)).unwrap();
        assert_eq!(s.config(), "1010".parse().unwrap());
        assert_eq!(s.render_word(Side::Right), "110");
    }

    #[test]
    fn sync_reads_both_cycles() {
        // D--_{2,2} with x1 = x2 = 0: f_c = ¬0 ∧ ¬0 = 1
        let mut s = state(2, 2, "000");
        s.exec_mut(Instruction::Sync).unwrap();
        assert_eq!(s.config(), "100".parse().unwrap());
        assert_eq!(s.changes(), 1);
    }

    #[test]
    fn instruction_round_trip() {
        for i in [
            Instruction::Sync,
            Instruction::Update(Side::Left, 2),
            Instruction::IncUp(Side::Right, 1, 3),
            Instruction::Erase(Side::Left),
            Instruction::Expand(Side::Right),
            Instruction::DecUp(Side::Left, 1, 1),
            Instruction::Shift(Side::Right),
        ] {
            assert_eq!(
                Instruction::from_parts(i.name(), i.cycle(), &i.indices()).unwrap(),
                i
            );
        }
        assert!(Instruction::from_parts("sync", Some(Side::Left), &[]).is_err());
        assert_eq!(
            Instruction::IncUp(Side::Right, 1, 3).to_string(),
            "incUp(right,1,3)"
        );
    }

    #[test]
    fn shift_destroys_at_most_one_factor_and_expand_keeps_all() {
        for size in 2..=10usize {
            let d = desc(size, 1, DoubleSigns::Negative);
            for bits in 0..1u64 << size {
                let s = VmState::new(d, Configuration::from_bits(size, bits).unwrap()).unwrap();
                let e = s.cycle_expressiveness(Side::Left);
                let shifted = exec(s, Instruction::Shift(Side::Left)).unwrap();
                assert!(shifted.cycle_expressiveness(Side::Left) + 1 >= e);
                let expanded = exec(s, Instruction::Expand(Side::Left)).unwrap();
                assert!(expanded.cycle_expressiveness(Side::Left) >= e);
                let erased = exec(s, Instruction::Erase(Side::Left)).unwrap();
                assert_eq!(erased.cycle_expressiveness(Side::Left), 0);
            }
        }
    }
}
