use std::io::Write as _;
use std::path::PathBuf;

use ban_core::combinatorics::{check_bounds, quantity_table, QuantityTable};
use ban_core::topology::{Descriptor, Junction, Side};
use ban_core::vm::{alternating, compile_builtin, run_traced, Builtin, VmState};
use ban_core::Configuration;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, ExitStatus, Result};
use crate::formats::{
    attractor_table, bounds_json, fraction, graph_dot, graph_json, parse_mode, quantity_csv,
    quantity_json, report_of, to_pretty, write_file, Input,
};
use crate::manifest::{resolve_caps, RunManifest, CAP_ENV};
use crate::parallel::build_transition_graph_par;
use crate::trace::{header_for, render, replay};
use crate::verify::{parse_range, parse_signs, run_family, Family, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "ban",
    version,
    about = "Exact analysis of Boolean automata networks"
)]
pub struct Cli {
    /// Largest network size enumerated in any mode (overrides BAN_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum JunctionArg {
    And,
    Or,
}

impl From<JunctionArg> for Junction {
    fn from(j: JunctionArg) -> Self {
        match j {
            JunctionArg::And => Junction::And,
            JunctionArg::Or => Junction::Or,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CycleArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition graph and attractors of a descriptor or network spec.
    Analyze(AnalyzeArgs),
    /// Closed-form period counts of a cycle or double-cycle.
    Predict(PredictArgs),
    /// Closed forms and sequence bounds against enumeration over a family.
    Verify(VerifyArgs),
    /// Compile and run a builtin instruction sequence.
    Sequence(SequenceArgs),
    /// Re-execute a sequence trace and check every line.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Descriptor such as `D--:3,2:and`, or a JSON network spec.
    pub input: String,
    /// parallel, async, elementary or blockseq[:BLOCKS].
    #[arg(long, default_value = "parallel")]
    pub mode: String,
    /// Block partition for blockseq, e.g. `0,1|2`.
    #[arg(long)]
    pub blocks: Option<String>,
    /// The partition may also follow the input, as in `--mode blockseq "0,1|2"`.
    #[arg(hide = true)]
    pub trailing_blocks: Option<String>,
    /// Junction for double-cycle descriptors that do not name one.
    #[arg(long, value_enum, default_value = "and")]
    pub junction: JunctionArg,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    pub descriptor: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also check the attractor-count and mean-period bounds.
    #[arg(long)]
    pub check_bounds: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// cycles, double-cycles, sequences, duality, robert or thomas.
    pub family: String,
    /// Sizes such as `2..8`, optionally preceded by a sign pattern
    /// (`positive`, `mixed` or `negative`).
    #[arg(num_args = 1..=2, required = true)]
    pub range: Vec<String>,
    /// Restrict double-cycle families to one sign pattern (`++`, `-+`, `--`
    /// or a word as above).
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random networks drawn by the robert and thomas families.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// Double-cycle descriptor, e.g. `D--:4,4:and`.
    pub descriptor: String,
    /// One of copy_c, copy, copy_p, fix0, fix1, simp, comp1, comp2, comp.
    pub builtin: String,
    /// Start configuration: a bit string, `alt`, `zeros` or `ones`.
    #[arg(required_unless_present = "start_flag")]
    pub start: Option<String>,
    #[arg(long = "start", conflicts_with = "start")]
    pub start_flag: Option<String>,
    /// Target for the copy family, in the same syntax as the start.
    #[arg(long)]
    pub target: Option<String>,
    /// Cycle copied by copy_c.
    #[arg(long, value_enum)]
    pub cycle: Option<CycleArg>,
    /// Write the JSON-lines trace here (`-` for stdout).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub trace: PathBuf,
}

/// Parses arguments, runs, prints errors and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::Usage.code()
            } else {
                ExitStatus::Pass.code()
            };
        }
    };
    match run(cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().code()
        }
    }
}

pub fn run(cli: Cli) -> Result<ExitStatus> {
    let env = std::env::var(CAP_ENV).ok();
    let caps = resolve_caps(cli.cap, env.as_deref())?;
    match cli.command {
        Command::Analyze(a) => analyze(a, caps),
        Command::Predict(p) => predict(p, caps),
        Command::Verify(v) => verify(v, caps),
        Command::Sequence(s) => sequence(s, caps),
        Command::Replay(r) => {
            let text = std::fs::read_to_string(&r.trace).map_err(|e| CliError::io(&r.trace, e))?;
            let out = replay(&text)?;
            println!(
                "{}: {} instructions replayed, {} updates, final {}",
                out.descriptor, out.instructions, out.steps, out.last
            );
            Ok(ExitStatus::Pass)
        }
    }
}

fn outputs(paths: &[&Option<PathBuf>]) -> Vec<String> {
    paths
        .iter()
        .filter_map(|p| p.as_ref())
        .map(|p| p.display().to_string())
        .collect()
}

fn analyze(a: AnalyzeArgs, caps: ban_core::dynamics::Caps) -> Result<ExitStatus> {
    let input = Input::resolve(&a.input, a.junction.into())?;
    let net = input.network();
    let blocks = a.blocks.as_deref().or(a.trailing_blocks.as_deref());
    let mode = parse_mode(&a.mode, blocks, net.n())?;
    let tg = build_transition_graph_par(&net, &mode, caps)?;
    let report = report_of(&tg);
    let mut manifest = RunManifest::new("analyze", &input.label(), caps);
    manifest.mode = Some(mode.to_string());
    manifest.outputs = outputs(&[&a.dot, &a.json]);
    print!("{}", attractor_table(&report, &mode));
    if let Some(path) = &a.dot {
        write_file(path, &graph_dot(&tg, &report, &manifest))?;
    }
    if let Some(path) = &a.json {
        write_file(path, &to_pretty(&graph_json(&tg, &report, &manifest)))?;
    }
    Ok(ExitStatus::Pass)
}

fn print_table(t: &QuantityTable) {
    println!("{} (omega = {})", t.descriptor, t.omega);
    println!("{:>8}  {:>12}  {:>12}  {:>12}", "p", "X", "X~", "A");
    for r in &t.rows {
        println!("{:>8}  {:>12}  {:>12}  {:>12}", r.p, r.x, r.x_tilde, r.a);
    }
    println!(
        "T = {}, mean period {}",
        t.total,
        fraction(&t.mean_period())
    );
}

fn predict(p: PredictArgs, caps: ban_core::dynamics::Caps) -> Result<ExitStatus> {
    let desc = Descriptor::parse(&p.descriptor, Junction::And)?;
    let table = quantity_table(&desc)?;
    let mut manifest = RunManifest::new("predict", &desc.to_string(), caps);
    manifest.outputs = outputs(&[&p.csv, &p.json]);
    print_table(&table);
    let mut status = ExitStatus::Pass;
    let bounds = if p.check_bounds {
        let v = check_bounds(&table)?;
        println!(
            "bounds: {} <= T = {} <= {} ({}), mean period {} >= {} ({})",
            fraction(&v.lower),
            fraction(&v.total),
            fraction(&v.upper),
            if v.total_within() { "ok" } else { "violated" },
            fraction(&v.mean_period),
            fraction(&v.half_omega),
            if v.mean_large() { "ok" } else { "violated" },
        );
        if !v.passed() {
            status = ExitStatus::Failure;
        }
        Some(bounds_json(&v))
    } else {
        None
    };
    if let Some(path) = &p.csv {
        write_file(path, &quantity_csv(&table, &manifest))?;
    }
    if let Some(path) = &p.json {
        write_file(path, &to_pretty(&quantity_json(&table, bounds, &manifest)))?;
    }
    Ok(status)
}

fn verify(v: VerifyArgs, caps: ban_core::dynamics::Caps) -> Result<ExitStatus> {
    let family = Family::parse(&v.family)?;
    let (signs, range) = match v.range.as_slice() {
        [range] => (v.signs.as_deref(), range),
        [signs, range] => (Some(signs.as_str()), range),
        _ => unreachable!("clap enforces one or two values"),
    };
    let mut opts = VerifyOptions::new(parse_range(range)?);
    opts.signs = signs.map(parse_signs).transpose()?;
    opts.caps = caps;
    opts.seed = v.seed;
    opts.count = v.count;
    let matrix = run_family(family, &opts)?;
    print!("{}", matrix.to_table());
    let mut manifest = RunManifest::new(
        "verify",
        &format!("{} {}", v.family, v.range.join(" ")),
        caps,
    );
    manifest.seed = Some(v.seed);
    manifest.outputs = outputs(&[&v.csv, &v.json]);
    if let Some(path) = &v.csv {
        write_file(
            path,
            &format!("{}\n{}", manifest.comment("#"), matrix.to_csv()),
        )?;
    }
    if let Some(path) = &v.json {
        let value = serde_json::json!({ "manifest": manifest, "rows": matrix.rows });
        write_file(path, &to_pretty(&value))?;
    }
    Ok(matrix.exit_status())
}

fn configuration(
    arg: &str,
    desc: &ban_core::topology::DoubleCycleDescriptor,
) -> Result<Configuration> {
    let n = desc.n();
    Ok(match arg {
        "alt" | "alternating" => alternating(desc),
        "zeros" => Configuration::zeros(n)?,
        "ones" => Configuration::ones(n)?,
        bits => {
            let x: Configuration = bits.parse()?;
            if x.width() != n {
                return Err(ban_core::Error::WidthMismatch {
                    expected: n,
                    got: x.width(),
                }
                .into());
            }
            x
        }
    })
}

fn sequence(s: SequenceArgs, caps: ban_core::dynamics::Caps) -> Result<ExitStatus> {
    let desc = match Descriptor::parse(&s.descriptor, Junction::And)? {
        Descriptor::DoubleCycle(d) => d,
        Descriptor::Cycle(_) => {
            return Err(CliError::Usage(
                "sequences run on double-cycle descriptors".to_string(),
            ))
        }
    };
    let start_arg = s
        .start
        .as_deref()
        .or(s.start_flag.as_deref())
        .expect("clap requires a start");
    let start = configuration(start_arg, &desc)?;
    let target = s
        .target
        .as_deref()
        .map(|t| configuration(t, &desc))
        .transpose()?;
    let side = s.cycle.map(|c| match c {
        CycleArg::Left => Side::Left,
        CycleArg::Right => Side::Right,
    });
    let builtin = Builtin::from_name(&s.builtin, target, side)?;
    let program = compile_builtin(desc, builtin, start)?;
    let (state, records) = run_traced(VmState::new(desc, start)?, &program, &mut |_| {})?;
    let mut manifest = RunManifest::new("sequence", &desc.label(), caps);
    manifest.outputs = outputs(&[&s.trace]);
    let text = render(&header_for(&program, manifest), &records);
    match s.trace.as_deref() {
        Some(p) if p.as_os_str() == "-" => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            return Ok(ExitStatus::Pass);
        }
        Some(p) => write_file(p, &text)?,
        None => {}
    }
    println!(
        "{} {} from {}: {} instructions, {} updates, final {}",
        desc.label(),
        builtin,
        start,
        program.len(),
        state.steps(),
        state.config()
    );
    for i in &program.instructions {
        println!("  {i}");
    }
    Ok(ExitStatus::Pass)
}
