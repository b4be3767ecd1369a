//! JSON-lines traces of sequence runs, and their replay.
//!
//! Line 1 is a header naming the double-cycle, the builtin and the start.
//! Every further line is one instruction with the configuration before and
//! after it, the cumulative update count and the expressiveness reached.

use ban_core::topology::{canonical_double_cycle, Descriptor, Junction, Side};
use ban_core::vm::{Instruction, Program, TraceRecord, VmState};
use ban_core::{AutomatonSet, Configuration};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub manifest: RunManifest,
    pub descriptor: String,
    pub builtin: Option<String>,
    pub start: String,
    pub target: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub instr: String,
    pub cycle: Option<String>,
    pub indices: Vec<usize>,
    pub pre: String,
    pub post: String,
    pub steps_so_far: u64,
    pub expressiveness: u64,
    /// `expand` found no boundary and did nothing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expand_noop: bool,
}

impl From<&TraceRecord> for TraceLine {
    fn from(r: &TraceRecord) -> Self {
        Self {
            instr: r.instruction.name().to_string(),
            cycle: r.instruction.cycle().map(|s| s.name().to_string()),
            indices: r.instruction.indices(),
            pre: r.pre.to_string(),
            post: r.post.to_string(),
            steps_so_far: r.steps,
            expressiveness: r.expressiveness,
            expand_noop: r.expand_noop,
        }
    }
}

pub fn render(header: &TraceHeader, records: &[TraceRecord]) -> String {
    let mut out = serde_json::to_string(header).expect("header serializes");
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(&TraceLine::from(r)).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn header_for(program: &Program, manifest: RunManifest) -> TraceHeader {
    TraceHeader {
        manifest,
        descriptor: program.descriptor.label(),
        builtin: program.builtin.map(|b| b.name().to_string()),
        start: program.start.to_string(),
        target: program
            .builtin
            .and_then(|b| b.target())
            .map(|t| t.to_string()),
    }
}

/// What a successful replay established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub descriptor: String,
    pub instructions: usize,
    pub steps: u64,
    pub last: Configuration,
}

fn side(name: &str, line: usize) -> Result<Side> {
    match name {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(CliError::Replay {
            line,
            message: format!("unknown cycle `{other}`"),
        }),
    }
}

fn config(s: &str, line: usize) -> Result<Configuration> {
    s.parse().map_err(|e: ban_core::Error| CliError::Replay {
        line,
        message: e.to_string(),
    })
}

/// Re-executes every record and re-asserts its `pre`, `post`, step count and
/// expressiveness, and that every single update is an asynchronous
/// transition of the canonical network.
pub fn replay(text: &str) -> Result<ReplayOutcome> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(CliError::Replay {
        line: 1,
        message: "empty trace".to_string(),
    })?;
    let fail = |line: usize, message: String| CliError::Replay { line, message };
    let header: TraceHeader =
        serde_json::from_str(first).map_err(|e| fail(1, format!("bad header: {e}")))?;
    let desc = match Descriptor::parse(&header.descriptor, Junction::And)? {
        Descriptor::DoubleCycle(d) => d,
        Descriptor::Cycle(_) => return Err(fail(1, "traces run on double-cycles".to_string())),
    };
    let net = canonical_double_cycle(desc);
    let mut state = VmState::new(desc, config(&header.start, 1)?)?;
    let mut count = 0;
    for (idx, raw) in lines {
        let line = idx + 1;
        let rec: TraceLine = serde_json::from_str(raw).map_err(|e| fail(line, e.to_string()))?;
        let cycle = rec.cycle.as_deref().map(|c| side(c, line)).transpose()?;
        let instr = Instruction::from_parts(&rec.instr, cycle, &rec.indices)
            .map_err(|e| fail(line, e.to_string()))?;
        if state.config() != config(&rec.pre, line)? {
            return Err(fail(
                line,
                format!("pre {} but replay is at {}", rec.pre, state.config()),
            ));
        }
        let mut illegal = None;
        state
            .exec_with(instr, &mut |s| {
                let ok = net.apply_update(AutomatonSet::singleton(s.automaton), &s.before)
                    == Ok(s.after);
                if !ok && illegal.is_none() {
                    illegal = Some(s.automaton);
                }
            })
            .map_err(|e| fail(line, e.to_string()))?;
        if let Some(a) = illegal {
            return Err(fail(
                line,
                format!("update of automaton {a} is not an asynchronous transition"),
            ));
        }
        if state.config() != config(&rec.post, line)? {
            return Err(fail(
                line,
                format!("post {} but replay reached {}", rec.post, state.config()),
            ));
        }
        if state.steps() != rec.steps_so_far {
            return Err(fail(
                line,
                format!(
                    "{} steps recorded, {} replayed",
                    rec.steps_so_far,
                    state.steps()
                ),
            ));
        }
        if state.expressiveness() != rec.expressiveness {
            return Err(fail(
                line,
                format!(
                    "expressiveness {} recorded, {} replayed",
                    rec.expressiveness,
                    state.expressiveness()
                ),
            ));
        }
        count += 1;
    }
    Ok(ReplayOutcome {
        descriptor: header.descriptor,
        instructions: count,
        steps: state.steps(),
        last: state.config(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ban_core::dynamics::Caps;
    use ban_core::topology::{DoubleCycleDescriptor, DoubleSigns};
    use ban_core::vm::{compile_builtin, run_traced, Builtin};

    fn trace_text() -> String {
        let d = DoubleCycleDescriptor::new(2, 2, DoubleSigns::Negative, Junction::And).unwrap();
        let start: Configuration = "110".parse().unwrap();
        let p = compile_builtin(d, Builtin::Simp, start).unwrap();
        let (_, recs) = run_traced(VmState::new(d, start).unwrap(), &p, &mut |_| {}).unwrap();
        render(
            &header_for(
                &p,
                RunManifest::new("sequence", "D--:2,2:and", Caps::default()),
            ),
            &recs,
        )
    }

    #[test]
    fn replay_accepts_its_own_traces() {
        let out = replay(&trace_text()).unwrap();
        assert_eq!(out.last.to_string(), "000");
        assert!(out.steps <= 4);
    }

    #[test]
    fn replay_rejects_tampering() {
        let text = trace_text();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut rec: TraceLine = serde_json::from_str(&lines[1]).unwrap();
        rec.post = if rec.post == "111" {
            "000".into()
        } else {
            "111".into()
        };
        lines[1] = serde_json::to_string(&rec).unwrap();
        match replay(&lines.join("\n")) {
            Err(CliError::Replay { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
