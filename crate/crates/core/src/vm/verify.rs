//! Exhaustive execution of the compound sequences against their stated
//! outcomes and update-count bounds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::combinatorics::unreachable_count;
use crate::config::{AutomatonSet, Configuration};
use crate::dynamics::{attractors, build_transition_graph, Caps, UpdateMode};
use crate::error::{Error, Result};
use crate::network::BooleanNetwork;
use crate::topology::{canonical_double_cycle, DoubleCycleDescriptor, DoubleSigns, Junction, Side};

use super::machine::VmState;
use super::programs::{alternating, alternating_left, compile_builtin, run, run_traced, Builtin};

/// What a bound counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundBasis {
    /// Every single-automaton update, including those that change nothing.
    Updates,
    /// Updates that change the configuration (trajectory length).
    Transitions,
}

/// First failing run of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub start: Configuration,
    pub target: Option<Configuration>,
    pub expected: Configuration,
    pub reached: Configuration,
    pub updates: u64,
    pub transitions: u64,
}

/// Outcome of one builtin over all of its admissible starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinCheck {
    pub name: &'static str,
    pub bound: i64,
    pub basis: BoundBasis,
    /// False for bounds that are reported but not part of the verdict.
    pub asserted: bool,
    pub runs: u64,
    /// Starts where a search in the table found nothing to select.
    pub precondition_failures: u64,
    pub wrong_final: u64,
    pub over_bound: u64,
    pub illegal_steps: u64,
    pub worst_updates: u64,
    pub worst_transitions: u64,
    pub counterexample: Option<Counterexample>,
}

impl BuiltinCheck {
    fn new(name: &'static str, bound: i64, basis: BoundBasis) -> Self {
        Self {
            name,
            bound,
            basis,
            asserted: true,
            runs: 0,
            precondition_failures: 0,
            wrong_final: 0,
            over_bound: 0,
            illegal_steps: 0,
            worst_updates: 0,
            worst_transitions: 0,
            counterexample: None,
        }
    }

    pub fn worst(&self) -> u64 {
        match self.basis {
            BoundBasis::Updates => self.worst_updates,
            BoundBasis::Transitions => self.worst_transitions,
        }
    }

    pub fn final_ok(&self) -> bool {
        self.wrong_final == 0 && self.illegal_steps == 0
    }

    pub fn bound_ok(&self) -> bool {
        self.over_bound == 0
    }

    pub fn passed(&self) -> bool {
        !self.asserted || (self.final_ok() && self.bound_ok())
    }
}

/// `copy_p(comp(simp(x)), x') = x'` over all ordered pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    pub pairs: u64,
    pub failures: u64,
}

/// Asynchronous attractors of a negative double-cycle, from the transition graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttractorCheck {
    pub terminal_sccs: usize,
    pub recurring: u64,
    /// `2^{l+r-1} - |I|`.
    pub expected_recurring: u64,
}

impl AttractorCheck {
    pub fn passed(&self) -> bool {
        self.terminal_sccs == 1 && self.recurring == self.expected_recurring
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub descriptor: DoubleCycleDescriptor,
    pub checks: Vec<BuiltinCheck>,
    pub closure: Option<ClosureCheck>,
    pub attractor: Option<AttractorCheck>,
}

impl SequenceReport {
    pub fn check(&self, name: &str) -> Option<&BuiltinCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(BuiltinCheck::passed)
            && self.closure.is_none_or(|c| c.failures == 0)
            && self.attractor.is_none_or(|a| a.passed())
    }
}

struct Runner {
    desc: DoubleCycleDescriptor,
    net: BooleanNetwork,
    /// Under `∨` every stated configuration is read through the complement.
    flip: bool,
}

impl Runner {
    fn view(&self, x: Configuration) -> Configuration {
        if self.flip {
            x.complement()
        } else {
            x
        }
    }

    /// Runs `builtin` from the `∧`-reading `start` and records the result.
    fn record(
        &self,
        check: &mut BuiltinCheck,
        builtin: Builtin,
        start: Configuration,
        expected: Configuration,
    ) -> Result<()> {
        let (start, expected) = (self.view(start), self.view(expected));
        let builtin = match builtin {
            Builtin::CopyP { target } => Builtin::CopyP {
                target: self.view(target),
            },
            Builtin::Copy { target } => Builtin::Copy {
                target: self.view(target),
            },
            b => b,
        };
        let program = match compile_builtin(self.desc, builtin, start) {
            Ok(p) => p,
            Err(Error::InapplicableBuiltin { .. }) => {
                check.precondition_failures += 1;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let mut illegal = 0u64;
        let (end, _) = run_traced(VmState::new(self.desc, start)?, &program, &mut |s| {
            let legal = self
                .net
                .apply_update(AutomatonSet::singleton(s.automaton), &s.before)
                == Ok(s.after);
            if !legal {
                illegal += 1;
            }
        })?;
        check.runs += 1;
        check.illegal_steps += illegal;
        let (updates, transitions) = (end.steps(), end.changes());
        check.worst_updates = check.worst_updates.max(updates);
        check.worst_transitions = check.worst_transitions.max(transitions);
        let counted = match check.basis {
            BoundBasis::Updates => updates,
            BoundBasis::Transitions => transitions,
        };
        let wrong = end.config() != expected || illegal > 0;
        let over = counted as i64 > check.bound;
        check.wrong_final += u64::from(wrong);
        check.over_bound += u64::from(over);
        if (wrong || over) && check.counterexample.is_none() {
            check.counterexample = Some(Counterexample {
                start,
                target: builtin.target(),
                expected,
                reached: end.config(),
                updates,
                transitions,
            });
        }
        Ok(())
    }
}

fn in_cycle(desc: &DoubleCycleDescriptor, x: &Configuration, side: Side, value: bool) -> bool {
    (0..desc.size(side)).any(|k| x.get(desc.global(side, k)) == value)
}

/// Executes every builtin that applies to `D_{l,r}` with the given signs
/// and junction from every admissible start, checking the final
/// configuration, the update-count bound and the legality of each update
/// as an asynchronous transition of the canonical network.
///
/// Sequences are run as written for `∧`; under `∨` the starts and the
/// stated results are mapped through the complement.
pub fn verify_sequence_theorems(
    l: usize,
    r: usize,
    signs: DoubleSigns,
    junction: Junction,
    caps: Caps,
) -> Result<SequenceReport> {
    let desc = DoubleCycleDescriptor::new(l, r, signs, junction)?;
    let n = desc.n();
    caps.check(n, &UpdateMode::Asynchronous)?;
    let and_desc = desc.with_junction(Junction::And);
    let and_net = canonical_double_cycle(and_desc);
    let runner = Runner {
        desc,
        net: canonical_double_cycle(desc),
        flip: junction == Junction::Or,
    };
    let (li, ri) = (l as i64, r as i64);
    let zeros = Configuration::zeros(n)?;
    let ones = Configuration::ones(n)?;
    let even_negative =
        signs == DoubleSigns::Negative && l.is_multiple_of(2) && r.is_multiple_of(2);
    let mut checks = Vec::new();

    if signs == DoubleSigns::Positive {
        let bound = 2 * (li + ri) - 5;
        let mut fix0 = BuiltinCheck::new("fix0", bound, BoundBasis::Transitions);
        let mut fix1 = BuiltinCheck::new("fix1", bound, BoundBasis::Transitions);
        for x in Configuration::all(n).filter(|x| !and_net.is_fixed_point(x)) {
            if x.count_ones() < n as u32 {
                runner.record(&mut fix0, Builtin::Fix0, x, zeros)?;
            }
            if in_cycle(&and_desc, &x, Side::Left, true)
                && in_cycle(&and_desc, &x, Side::Right, true)
            {
                runner.record(&mut fix1, Builtin::Fix1, x, ones)?;
            }
        }
        checks.push(fix0);
        checks.push(fix1);
    } else {
        let mut simp = BuiltinCheck::new("simp", 2 * li + ri - 2, BoundBasis::Updates);
        for x in Configuration::all(n) {
            runner.record(&mut simp, Builtin::Simp, x, zeros)?;
        }
        checks.push(simp);
    }

    let mut closure = None;
    if even_negative {
        let alt = alternating(&and_desc);
        let alt_left = alternating_left(&and_desc);
        let mut comp1 = BuiltinCheck::new("comp1", (li - 1) * (li + ri - 2), BoundBasis::Updates);
        runner.record(&mut comp1, Builtin::Comp1, zeros, alt_left)?;
        let mut comp2 = BuiltinCheck::new(
            "comp2",
            (ri - 2) * (li + ri - 2) + (2 * ri - 1),
            BoundBasis::Updates,
        );
        runner.record(&mut comp2, Builtin::Comp2, alt_left, alt)?;
        let mut comp = BuiltinCheck::new(
            "comp",
            (li + ri).pow(2) - 5 * (li - 1) - 3 * ri,
            BoundBasis::Updates,
        );
        runner.record(&mut comp, Builtin::Comp, zeros, alt)?;
        let mut copy_p = BuiltinCheck::new("copy_p", 3 * (li + ri - 4) - 1, BoundBasis::Updates);
        let mut copy = BuiltinCheck::new("copy", 2 * (li + ri - 6), BoundBasis::Updates);
        copy.asserted = false;
        for target in Configuration::all(n) {
            runner.record(&mut copy_p, Builtin::CopyP { target }, alt, target)?;
            if target.get(0) == alt.get(0) {
                runner.record(&mut copy, Builtin::Copy { target }, alt, target)?;
            }
        }
        checks.extend([comp1, comp2, comp, copy_p, copy]);
        closure = Some(check_closure(&runner, n)?);
    }

    let attractor = if signs == DoubleSigns::Negative {
        let tg = build_transition_graph(&runner.net, &UpdateMode::Asynchronous, caps)?;
        let report = attractors(&tg);
        let unreachable = unreachable_count(l as u64, r as u64)?
            .to_u64()
            .expect("fits: n <= 64");
        Some(AttractorCheck {
            terminal_sccs: report.attractors.len(),
            recurring: report.recurring_count() as u64,
            expected_recurring: (1u64 << n) - unreachable,
        })
    } else {
        None
    };

    Ok(SequenceReport {
        descriptor: desc,
        checks,
        closure,
        attractor,
    })
}

/// Evaluates the composition for every ordered pair, memoizing each stage
/// on its input configuration (the sequences are deterministic).
fn check_closure(runner: &Runner, n: usize) -> Result<ClosureCheck> {
    let desc = runner.desc;
    let exec = |b: Builtin, x: Configuration| -> Result<Configuration> {
        let p = compile_builtin(desc, b, x)?;
        Ok(run(VmState::new(desc, x)?, &p)?.0.config())
    };
    let mut after_comp: BTreeMap<Configuration, Configuration> = BTreeMap::new();
    let mut checked: BTreeMap<Configuration, u64> = BTreeMap::new();
    let mut failures_by_source: BTreeMap<Configuration, u64> = BTreeMap::new();
    let mut pairs = 0u64;
    let mut failures = 0u64;
    for x in Configuration::all(n) {
        let y = exec(Builtin::Simp, x)?;
        let z = match after_comp.get(&y) {
            Some(&z) => z,
            None => {
                let z = exec(Builtin::Comp, y)?;
                after_comp.insert(y, z);
                z
            }
        };
        if checked.contains_key(&z) {
            pairs += 1 << n;
            failures += failures_by_source[&z];
            continue;
        }
        let mut bad = 0;
        for target in Configuration::all(n) {
            let reached = exec(Builtin::CopyP { target }, z)?;
            bad += u64::from(reached != target);
        }
        checked.insert(z, 1 << n);
        failures_by_source.insert(z, bad);
        pairs += 1 << n;
        failures += bad;
    }
    Ok(ClosureCheck { pairs, failures })
}
