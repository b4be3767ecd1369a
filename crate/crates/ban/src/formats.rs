//! Network specs, descriptors and the exported artifacts (JSON, DOT, CSV).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ban_core::combinatorics::{printed_sums, BoundsVerdict, QuantityTable};
use ban_core::dynamics::{
    attractors, AttractorReport, BlockPartition, TransitionGraph, UpdateMode,
};
use ban_core::topology::{Descriptor, Junction};
use ban_core::{BooleanNetwork, Configuration, Expr};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

/// Graphs with more labelled arcs than this are exported without arc lists.
pub const ARC_EXPORT_LIMIT: u64 = 1 << 20;

/// On-disk network: `{"n": 3, "locals": ["x0 or not x1", …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub n: usize,
    pub locals: Vec<String>,
}

impl NetworkSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Core(ban_core::Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        })
    }

    pub fn network(&self) -> Result<BooleanNetwork> {
        if self.locals.len() != self.n {
            return Err(CliError::Usage(format!(
                "network spec declares n = {} but lists {} local functions",
                self.n,
                self.locals.len()
            )));
        }
        let mut exprs = Vec::with_capacity(self.n);
        for (i, src) in self.locals.iter().enumerate() {
            let e = Expr::parse(src).map_err(|e| match e {
                ban_core::Error::Parse {
                    line,
                    column,
                    message,
                } => ban_core::Error::Parse {
                    line,
                    column,
                    message: format!("locals[{i}]: {message}"),
                },
                other => other,
            })?;
            exprs.push(e);
        }
        Ok(BooleanNetwork::from_exprs(exprs)?)
    }

    pub fn of_network(net: &BooleanNetwork) -> Option<Self> {
        let locals = net
            .locals()
            .iter()
            .map(|f| f.expr().map(|e| e.to_string()))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { n: net.n(), locals })
    }
}

/// What a command runs on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Descriptor(Descriptor),
    Spec {
        path: String,
        network: BooleanNetwork,
    },
}

impl Input {
    /// A path to an existing file or anything ending in `.json` is read as a
    /// network spec; everything else must be a descriptor.
    pub fn resolve(arg: &str, junction: Junction) -> Result<Self> {
        let path = Path::new(arg);
        if arg.ends_with(".json") || path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let network = NetworkSpec::parse(&text)?.network()?;
            Ok(Input::Spec {
                path: arg.to_string(),
                network,
            })
        } else {
            Ok(Input::Descriptor(Descriptor::parse(arg, junction)?))
        }
    }

    pub fn network(&self) -> BooleanNetwork {
        match self {
            Input::Descriptor(d) => d.network(),
            Input::Spec { network, .. } => network.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Input::Descriptor(d) => d.to_string(),
            Input::Spec { path, .. } => path.clone(),
        }
    }
}

/// `parallel`, `async`, `elementary` or `blockseq` (with `0,1|2` blocks,
/// given separately or as `blockseq:0,1|2`).
pub fn parse_mode(name: &str, blocks: Option<&str>, n: usize) -> Result<UpdateMode> {
    let (head, inline) = match name.split_once(':') {
        Some((h, b)) => (h, Some(b)),
        None => (name, None),
    };
    match head {
        "parallel" => Ok(UpdateMode::Parallel),
        "async" | "asynchronous" => Ok(UpdateMode::Asynchronous),
        "elementary" => Ok(UpdateMode::Elementary),
        "blockseq" | "block-sequential" => {
            let spec = inline.or(blocks).ok_or_else(|| {
                CliError::Usage("blockseq needs a partition such as `0,1|2`".to_string())
            })?;
            Ok(UpdateMode::BlockSequential(BlockPartition::parse(n, spec)?))
        }
        other => Err(CliError::Usage(format!("unknown mode `{other}`"))),
    }
}

fn attractor_json(report: &AttractorReport) -> Vec<Value> {
    report
        .attractors
        .iter()
        .map(|a| {
            json!({
                "length": a.len(),
                "period": a.period,
                "states": a.states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect()
}

/// Labelled arcs in vertex order, or `None` above [`ARC_EXPORT_LIMIT`].
fn arcs(tg: &TransitionGraph) -> Option<Vec<(String, String, String)>> {
    if tg.arc_count() > ARC_EXPORT_LIMIT {
        return None;
    }
    let mut out = Vec::with_capacity(tg.arc_count() as usize);
    for x in Configuration::all(tg.n()) {
        for (label, y) in tg.labeled_arcs(&x) {
            out.push((x.to_string(), label.to_string(), y.to_string()));
        }
    }
    Some(out)
}

/// `{manifest, mode, n, arcs, attractors, convergence_time}`.
pub fn graph_json(tg: &TransitionGraph, report: &AttractorReport, manifest: &RunManifest) -> Value {
    let arcs = arcs(tg).map(|a| {
        a.into_iter()
            .map(|(x, w, y)| json!({"from": x, "label": w, "to": y}))
            .collect::<Vec<_>>()
    });
    json!({
        "manifest": manifest,
        "mode": tg.mode().to_string(),
        "n": tg.n(),
        "arc_count": tg.arc_count(),
        "arcs": arcs,
        "attractors": attractor_json(report),
        "fixed_points": report.fixed_points().count(),
        "oscillations": report.oscillations().count(),
        "recurring": report.recurring_count(),
        "convergence_time": report.convergence_time,
    })
}

/// GraphViz rendering: fixed points light gray, oscillation members dark gray.
pub fn graph_dot(tg: &TransitionGraph, report: &AttractorReport, manifest: &RunManifest) -> String {
    let mut fill: BTreeMap<Configuration, &str> = BTreeMap::new();
    for a in &report.attractors {
        let color = if a.is_fixed_point() {
            "lightgray"
        } else {
            "darkgray"
        };
        for &s in &a.states {
            fill.insert(s, color);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{}", manifest.comment("//"));
    let _ = writeln!(out, "digraph transitions {{");
    let _ = writeln!(out, "  node [shape=box, style=filled, fillcolor=white];");
    for x in Configuration::all(tg.n()) {
        let color = fill.get(&x).copied().unwrap_or("white");
        let _ = writeln!(out, "  \"{x}\" [fillcolor={color}];");
    }
    match arcs(tg) {
        Some(list) => {
            let labelled = !tg.is_deterministic();
            for (x, w, y) in list {
                if labelled {
                    let _ = writeln!(out, "  \"{x}\" -> \"{y}\" [label=\"{w}\"];");
                } else {
                    let _ = writeln!(out, "  \"{x}\" -> \"{y}\";");
                }
            }
        }
        None => {
            let _ = writeln!(out, "  // {} arcs omitted", tg.arc_count());
        }
    }
    out.push_str("}\n");
    out
}

/// Plain-text attractor table.
pub fn attractor_table(report: &AttractorReport, mode: &UpdateMode) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "mode {mode}: {} attractors ({} fixed points, {} oscillations), {} recurring of {}, convergence time {}",
        report.attractors.len(),
        report.fixed_points().count(),
        report.oscillations().count(),
        report.recurring_count(),
        1u64 << report.n,
        report.convergence_time
    );
    let _ = writeln!(out, "{:>4}  {:>8}  {:>8}  states", "#", "length", "period");
    for (k, a) in report.attractors.iter().enumerate() {
        let period = a.period.map_or("-".to_string(), |p| p.to_string());
        let states: Vec<String> = a.states.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "{:>4}  {:>8}  {:>8}  {}",
            k + 1,
            a.len(),
            period,
            states.join(" ")
        );
    }
    out
}

/// Exact rational as `a/b`, or `a` when integral.
pub fn fraction(q: &impl std::fmt::Display) -> String {
    q.to_string()
}

/// CSV with one row per divisor of `ω` and a final `total` row.
pub fn quantity_csv(table: &QuantityTable, manifest: &RunManifest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", manifest.comment("#"));
    out.push_str("descriptor,omega,p,X,X~,A\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            table.descriptor, table.omega, r.p, r.x, r.x_tilde, r.a
        );
    }
    let _ = writeln!(
        out,
        "{},{},total,,,{}",
        table.descriptor, table.omega, table.total
    );
    out
}

pub fn bounds_json(v: &BoundsVerdict) -> Value {
    json!({
        "lower": fraction(&v.lower),
        "total": fraction(&v.total),
        "upper": fraction(&v.upper),
        "mean_period": fraction(&v.mean_period),
        "half_omega": fraction(&v.half_omega),
        "total_within": v.total_within(),
        "mean_large": v.mean_large(),
    })
}

/// The table plus the printed expanded sums next to their derived values.
pub fn quantity_json(
    table: &QuantityTable,
    bounds: Option<Value>,
    manifest: &RunManifest,
) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "X": r.x.to_string(),
                "X~": r.x_tilde.to_string(),
                "A": r.a.to_string(),
            })
        })
        .collect();
    let printed: Vec<Value> = printed_sums(&table.descriptor)
        .iter()
        .map(|s| {
            json!({
                "quantity": s.quantity.name(),
                "p": s.p,
                "printed": fraction(&s.printed),
                "derived": fraction(&s.derived),
                "matches": s.matches(),
            })
        })
        .collect();
    json!({
        "manifest": manifest,
        "descriptor": table.descriptor.to_string(),
        "omega": table.omega,
        "rows": rows,
        "total": table.total.to_string(),
        "mean_period": fraction(&table.mean_period()),
        "printed_sums": printed,
        "bounds": bounds,
    })
}

/// Attractors of `tg`, shared by the analyze command and tests.
pub fn report_of(tg: &TransitionGraph) -> AttractorReport {
    attractors(tg)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}
