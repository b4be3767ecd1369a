//! The compound update sequences, compiled to plain instruction lists.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::topology::{DoubleCycleDescriptor, DoubleSigns, Junction, Side};

use super::machine::{ExecOutcome, Instruction, Step, VmState};

/// A named compound sequence with its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    CopyC { target: Configuration, side: Side },
    Copy { target: Configuration },
    CopyP { target: Configuration },
    Fix0,
    Fix1,
    Simp,
    Comp1,
    Comp2,
    Comp,
}

impl Builtin {
    pub const NAMES: [&'static str; 9] = [
        "copy_c", "copy", "copy_p", "fix0", "fix1", "simp", "comp1", "comp2", "comp",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::CopyC { .. } => "copy_c",
            Builtin::Copy { .. } => "copy",
            Builtin::CopyP { .. } => "copy_p",
            Builtin::Fix0 => "fix0",
            Builtin::Fix1 => "fix1",
            Builtin::Simp => "simp",
            Builtin::Comp1 => "comp1",
            Builtin::Comp2 => "comp2",
            Builtin::Comp => "comp",
        }
    }

    /// Builds a builtin from its name. The copy family needs a target and
    /// `copy_c` a cycle.
    pub fn from_name(
        name: &str,
        target: Option<Configuration>,
        side: Option<Side>,
    ) -> Result<Self> {
        let need_target =
            || target.ok_or_else(|| inapplicable(name, "a target configuration is required"));
        Ok(match name {
            "copy_c" => Builtin::CopyC {
                target: need_target()?,
                side: side.ok_or_else(|| inapplicable(name, "a cycle is required"))?,
            },
            "copy" => Builtin::Copy {
                target: need_target()?,
            },
            "copy_p" => Builtin::CopyP {
                target: need_target()?,
            },
            "fix0" => Builtin::Fix0,
            "fix1" => Builtin::Fix1,
            "simp" => Builtin::Simp,
            "comp1" => Builtin::Comp1,
            "comp2" => Builtin::Comp2,
            "comp" => Builtin::Comp,
            _ => return Err(inapplicable(name, "unknown builtin")),
        })
    }

    pub fn target(&self) -> Option<Configuration> {
        match *self {
            Builtin::CopyC { target, .. }
            | Builtin::Copy { target }
            | Builtin::CopyP { target } => Some(target),
            _ => None,
        }
    }

    /// Whether the sign pattern is one the sequence is written for.
    pub fn accepts_signs(&self, desc: &DoubleCycleDescriptor) -> bool {
        match self {
            Builtin::Fix0 | Builtin::Fix1 => desc.signs == DoubleSigns::Positive,
            Builtin::Simp => desc.signs != DoubleSigns::Positive,
            Builtin::Comp1 | Builtin::Comp2 | Builtin::Comp | Builtin::CopyP { .. } => {
                desc.signs == DoubleSigns::Negative
                    && desc.l.is_multiple_of(2)
                    && desc.r.is_multiple_of(2)
            }
            Builtin::CopyC { .. } | Builtin::Copy { .. } => true,
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            Builtin::CopyC { target, side } => write!(f, "({target},{})", side.name()),
            Builtin::Copy { target } | Builtin::CopyP { target } => write!(f, "({target})"),
            _ => Ok(()),
        }
    }
}

fn inapplicable(name: &str, reason: &str) -> Error {
    Error::InapplicableBuiltin {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

/// Which alternation hypothesis of the copy lemma a cycle satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CopyCondition {
    /// The whole word alternates.
    Alternating,
    /// All but the last position alternate and the last already matches.
    LastMatches,
    /// All but the last position alternate and some inner position differs.
    InnerDiffers,
}

impl CopyCondition {
    /// The first hypothesis that holds for cycle `side` of `x` towards `target`.
    pub fn of(
        desc: &DoubleCycleDescriptor,
        x: &Configuration,
        target: &Configuration,
        side: Side,
    ) -> Option<Self> {
        let size = desc.size(side);
        let w = |k| x.get(desc.global(side, k));
        let t = |k| target.get(desc.global(side, k));
        let alternates_to = |end: usize| (1..end).all(|i| w(i) != w(i - 1));
        if alternates_to(size) {
            Some(CopyCondition::Alternating)
        } else if size >= 2 && alternates_to(size - 1) && w(size - 1) == t(size - 1) {
            Some(CopyCondition::LastMatches)
        } else if size >= 2 && alternates_to(size - 1) && (1..size - 1).any(|p| w(p) != t(p)) {
            Some(CopyCondition::InnerDiffers)
        } else {
            None
        }
    }
}

/// A builtin resolved against a start configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub descriptor: DoubleCycleDescriptor,
    pub builtin: Option<Builtin>,
    /// Configuration the data-dependent choices were resolved against.
    pub start: Configuration,
    pub instructions: Vec<Instruction>,
    /// Copy-lemma hypothesis per cycle (left, right), for `copy_c` and `copy`.
    pub copy_conditions: Option<[Option<CopyCondition>; 2]>,
}

impl Program {
    /// A hand-written program.
    pub fn new(
        descriptor: DoubleCycleDescriptor,
        start: Configuration,
        instructions: Vec<Instruction>,
    ) -> Self {
        Self {
            descriptor,
            builtin: None,
            start,
            instructions,
            copy_conditions: None,
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

/// Runs a builtin on a live state while recording the instructions.
struct Compiler {
    name: &'static str,
    state: VmState,
    out: Vec<Instruction>,
}

impl Compiler {
    fn emit(&mut self, instr: Instruction) -> Result<()> {
        self.state.exec_mut(instr)?;
        self.out.push(instr);
        Ok(())
    }

    fn x0(&self) -> bool {
        self.state.get(Side::Left, 0)
    }

    fn min_k(&self, side: Side, value: bool) -> Result<usize> {
        self.state
            .word(side)
            .iter()
            .position(|&b| b == value)
            .ok_or_else(|| {
                let reason = alloc::format!(
                    "no automaton of the {} cycle is in state {}",
                    side.name(),
                    value as u8
                );
                inapplicable(self.name, &reason)
            })
    }

    fn fix0(&mut self) -> Result<()> {
        let l = self.state.size(Side::Left);
        if self.x0() {
            let i = self.min_k(Side::Left, false)?;
            self.emit(Instruction::IncUp(Side::Left, i + 1, l - 1))?;
            self.emit(Instruction::Sync)?;
        }
        self.emit(Instruction::Erase(Side::Left))?;
        self.emit(Instruction::Erase(Side::Right))
    }

    fn fix1(&mut self) -> Result<()> {
        if !self.x0() {
            for side in [Side::Left, Side::Right] {
                let i = self.min_k(side, true)?;
                self.emit(Instruction::IncUp(side, i + 1, self.state.size(side) - 1))?;
            }
            self.emit(Instruction::Sync)?;
        }
        self.emit(Instruction::Erase(Side::Left))?;
        self.emit(Instruction::Erase(Side::Right))
    }

    fn simp(&mut self) -> Result<()> {
        if self.x0() {
            self.emit(Instruction::Erase(Side::Left))?;
            self.emit(Instruction::Sync)?;
        }
        self.emit(Instruction::Erase(Side::Left))?;
        self.emit(Instruction::Erase(Side::Right))
    }

    fn comp1(&mut self) -> Result<()> {
        for _ in 1..self.state.size(Side::Left) {
            self.emit(Instruction::Sync)?;
            self.emit(Instruction::Expand(Side::Left))?;
            self.emit(Instruction::Erase(Side::Right))?;
        }
        Ok(())
    }

    fn comp2(&mut self) -> Result<()> {
        if self.state.word(Side::Right).iter().all(|&b| b) {
            self.emit(Instruction::Sync)?;
            self.emit(Instruction::Erase(Side::Right))?;
        }
        self.emit(Instruction::Sync)?;
        self.emit(Instruction::Expand(Side::Right))?;
        for _ in 2..self.state.size(Side::Right) {
            self.emit(Instruction::Shift(Side::Left))?;
            self.emit(Instruction::Sync)?;
            self.emit(Instruction::Expand(Side::Right))?;
        }
        Ok(())
    }

    fn copy_c(&mut self, target: &Configuration, side: Side) -> Result<()> {
        let desc = self.state.descriptor();
        let eta = desc.size(side);
        let t = |k| target.get(desc.global(side, k));
        let w = self.state.word(side);
        let j = if eta >= 2 && w[eta - 1] == w[eta - 2] && w[eta - 1] != t(eta - 1) {
            (0..eta - 1)
                .rev()
                .find(|&k| w[k] != t(k))
                .ok_or_else(|| inapplicable(self.name, "no position before the last differs"))?
        } else {
            eta
        };
        if j == 0 {
            return Err(inapplicable(
                self.name,
                "the shared automaton differs from the target",
            ));
        }
        for k in (j + 1..eta).rev() {
            self.emit(Instruction::Update(side, k - 1))?;
            self.emit(Instruction::Update(side, k))?;
        }
        for k in (1..j).rev() {
            if self.state.get(side, k) != t(k) {
                self.emit(Instruction::Update(side, k))?;
            }
        }
        Ok(())
    }

    fn copy(&mut self, target: &Configuration) -> Result<()> {
        self.copy_c(target, Side::Left)?;
        self.copy_c(target, Side::Right)
    }

    fn copy_p(&mut self, target: &Configuration) -> Result<()> {
        if self.x0() != target.get(0) {
            self.emit(Instruction::Shift(Side::Left))?;
            self.emit(Instruction::Shift(Side::Right))?;
            self.emit(Instruction::Sync)?;
        }
        self.copy(target)
    }
}

/// Resolves `builtin` against `start`: branch conditions and the min/max
/// searches are evaluated on the state the sequence itself produces, and
/// the choices are frozen into the returned instruction list.
///
/// Sequences are written for the `∧` junction. Under `∨` the program is
/// resolved on the complemented start of the `∧` dual; running it from
/// `start` under `∨` then traces the complemented trajectory.
pub fn compile_builtin(
    desc: DoubleCycleDescriptor,
    builtin: Builtin,
    start: Configuration,
) -> Result<Program> {
    let name = builtin.name();
    if !builtin.accepts_signs(&desc) {
        let reason = alloc::format!(
            "not written for D{}_{{{},{}}}",
            desc.signs.tag(),
            desc.l,
            desc.r
        );
        return Err(inapplicable(name, &reason));
    }
    let flip = desc.junction == Junction::Or;
    let and_desc = desc.with_junction(Junction::And);
    let resolve = |c: Configuration| if flip { c.complement() } else { c };
    let and_start = resolve(start);
    let mut copy_conditions = None;
    if let Some(target) = builtin.target() {
        if target.width() != desc.n() {
            return Err(Error::WidthMismatch {
                expected: desc.n(),
                got: target.width(),
            });
        }
        let target = resolve(target);
        if !matches!(builtin, Builtin::CopyP { .. }) {
            if and_start.get(0) != target.get(0) {
                return Err(inapplicable(
                    name,
                    "start and target disagree on the shared automaton",
                ));
            }
            let conds = [Side::Left, Side::Right]
                .map(|s| CopyCondition::of(&and_desc, &and_start, &target, s));
            let needed: &[usize] = match builtin {
                Builtin::CopyC {
                    side: Side::Left, ..
                } => &[0],
                Builtin::CopyC {
                    side: Side::Right, ..
                } => &[1],
                _ => &[0, 1],
            };
            if needed.iter().any(|&i| conds[i].is_none()) {
                return Err(inapplicable(
                    name,
                    "no alternation hypothesis of the copy lemma holds",
                ));
            }
            copy_conditions = Some(conds);
        }
    }
    let mut c = Compiler {
        name,
        state: VmState::new(and_desc, and_start)?,
        out: Vec::new(),
    };
    match builtin {
        Builtin::CopyC { target, side } => c.copy_c(&resolve(target), side)?,
        Builtin::Copy { target } => c.copy(&resolve(target))?,
        Builtin::CopyP { target } => c.copy_p(&resolve(target))?,
        Builtin::Fix0 => c.fix0()?,
        Builtin::Fix1 => c.fix1()?,
        Builtin::Simp => c.simp()?,
        Builtin::Comp1 => c.comp1()?,
        Builtin::Comp2 => c.comp2()?,
        Builtin::Comp => {
            c.comp1()?;
            c.comp2()?
        }
    }
    Ok(Program {
        descriptor: desc,
        builtin: Some(builtin),
        start,
        instructions: c.out,
        copy_conditions,
    })
}

/// One executed instruction with the state around it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub instruction: Instruction,
    pub pre: Configuration,
    pub post: Configuration,
    /// Cumulative single-automaton updates after this instruction.
    pub steps: u64,
    pub expressiveness: u64,
    pub expand_noop: bool,
}

/// Folds `exec` over the program.
pub fn run(mut state: VmState, program: &Program) -> Result<(VmState, u64)> {
    check_descriptor(&state, program)?;
    let start = state.steps();
    for &i in &program.instructions {
        state.exec_mut(i)?;
    }
    let steps = state.steps() - start;
    Ok((state, steps))
}

/// `run` that also reports every instruction and every single update.
pub fn run_traced(
    mut state: VmState,
    program: &Program,
    on_step: &mut dyn FnMut(Step),
) -> Result<(VmState, Vec<TraceRecord>)> {
    check_descriptor(&state, program)?;
    let mut trace = Vec::with_capacity(program.len());
    for &instruction in &program.instructions {
        let pre = state.config();
        let ExecOutcome { expand_noop, .. } = state.exec_with(instruction, on_step)?;
        trace.push(TraceRecord {
            instruction,
            pre,
            post: state.config(),
            steps: state.steps(),
            expressiveness: state.expressiveness(),
            expand_noop,
        });
    }
    Ok((state, trace))
}

fn check_descriptor(state: &VmState, program: &Program) -> Result<()> {
    if state.descriptor() != program.descriptor {
        return Err(Error::InvalidDescriptor(String::from(
            "program was compiled for another double-cycle",
        )));
    }
    Ok(())
}

/// `((10)^{l/2}, (10)^{r/2})`, the most expressive configuration reached by `comp`.
pub fn alternating(desc: &DoubleCycleDescriptor) -> Configuration {
    let mut x = Configuration::zeros(desc.n()).expect("descriptor width is valid");
    for side in [Side::Left, Side::Right] {
        for k in 0..desc.size(side) {
            x.set(desc.global(side, k), k % 2 == 0);
        }
    }
    x
}

/// `((10)^{l/2}, 1^r)`, where `comp1` stops.
pub fn alternating_left(desc: &DoubleCycleDescriptor) -> Configuration {
    let mut x = alternating(desc);
    for k in 1..desc.r {
        x.set(desc.global(Side::Right, k), true);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(l: usize, r: usize, signs: DoubleSigns) -> DoubleCycleDescriptor {
        DoubleCycleDescriptor::new(l, r, signs, Junction::And).unwrap()
    }

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn final_of(d: DoubleCycleDescriptor, b: Builtin, x: &str) -> (Configuration, u64) {
        let p = compile_builtin(d, b, cfg(x)).unwrap();
        let (s, steps) = run(VmState::new(d, cfg(x)).unwrap(), &p).unwrap();
        (s.config(), steps)
    }

    #[test]
    fn fix_sequences_on_the_smallest_positive_double_cycle() {
        let d = desc(2, 2, DoubleSigns::Positive);
        assert_eq!(final_of(d, Builtin::Fix0, "011").0, cfg("000"));
        assert_eq!(final_of(d, Builtin::Fix1, "011").0, cfg("111"));
        let err = compile_builtin(d, Builtin::Fix0, cfg("110")).unwrap_err();
        assert!(matches!(err, Error::InapplicableBuiltin { .. }));
    }

    #[test]
    fn simp_reaches_zero_within_bound() {
        let d = desc(2, 2, DoubleSigns::Negative);
        for x in Configuration::all(3) {
            let p = compile_builtin(d, Builtin::Simp, x).unwrap();
            let (s, steps) = run(VmState::new(d, x).unwrap(), &p).unwrap();
            assert_eq!(s.config(), cfg("000"));
            assert!(steps <= 4);
        }
        assert_eq!(
            final_of(desc(1, 3, DoubleSigns::Mixed), Builtin::Simp, "111").0,
            cfg("000")
        );
    }

    #[test]
    fn comp_from_zero() {
        let d = desc(2, 2, DoubleSigns::Negative);
        let (x, steps) = final_of(d, Builtin::Comp, "000");
        assert_eq!(x, alternating(&d));
        assert_eq!(x, cfg("100"));
        assert!(steps <= 5);
        assert_eq!(final_of(d, Builtin::Comp1, "000").0, alternating_left(&d));
    }

    #[test]
    fn copy_onto_itself_is_free() {
        let d = desc(4, 4, DoubleSigns::Negative);
        let x = alternating(&d);
        let p = compile_builtin(d, Builtin::Copy { target: x }, x).unwrap();
        assert!(p.is_empty());
        assert_eq!(
            p.copy_conditions,
            Some([Some(CopyCondition::Alternating); 2])
        );
        let (s, steps) = run(VmState::new(d, x).unwrap(), &p).unwrap();
        assert_eq!((s.changes(), steps), (0, 0));
        assert!(steps as i64 <= 2 * (4 + 4 - 6));
    }

    #[test]
    fn copy_p_reaches_every_target_from_the_alternating_start() {
        let d = desc(2, 4, DoubleSigns::Negative);
        let start = alternating(&d);
        for target in Configuration::all(d.n()) {
            let p = compile_builtin(d, Builtin::CopyP { target }, start).unwrap();
            assert_eq!(
                run(VmState::new(d, start).unwrap(), &p).unwrap().0.config(),
                target
            );
        }
    }

    #[test]
    fn or_junction_runs_the_complemented_trajectory() {
        let and = desc(2, 2, DoubleSigns::Positive);
        let or = and.with_junction(Junction::Or);
        let p = compile_builtin(or, Builtin::Fix0, cfg("100")).unwrap();
        let (s, _) = run(VmState::new(or, cfg("100")).unwrap(), &p).unwrap();
        assert_eq!(s.config(), cfg("111"));
    }

    #[test]
    fn wrong_sign_pattern_is_rejected() {
        let err = compile_builtin(desc(2, 2, DoubleSigns::Negative), Builtin::Fix1, cfg("011"));
        assert!(matches!(err, Err(Error::InapplicableBuiltin { .. })));
        let err = compile_builtin(
            desc(3, 2, DoubleSigns::Negative),
            Builtin::Comp,
            cfg("0000"),
        );
        assert!(err.is_err());
    }

    #[test]
    fn replay_is_deterministic() {
        let d = desc(4, 2, DoubleSigns::Negative);
        let p = compile_builtin(d, Builtin::Comp, Configuration::zeros(5).unwrap()).unwrap();
        let a = run(VmState::new(d, p.start).unwrap(), &p).unwrap();
        let b = run(VmState::new(d, p.start).unwrap(), &p).unwrap();
        assert_eq!(a, b);
        let empty = Program::new(d, p.start, Vec::new());
        let (s, steps) = run(VmState::new(d, p.start).unwrap(), &empty).unwrap();
        assert_eq!((s.config(), steps), (p.start, 0));
    }
}
