//! The `tstkit` command line.
//!
//! Exit codes: 0 success (compliant, no deadlock found, run reached
//! success), 1 a negative answer (not compliant, deadlock, violation,
//! rejected script), 2 usage or input errors, 3 inconclusive (queue bound
//! hit, budget exhausted).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tstkit_core::compliance::{
    check_async_deadlock_with, check_sync_compliance_with, r_compliant, remainder, sync_reachability, ComplianceError,
    Verdict,
};
use tstkit_core::harness::{
    discretized_oracle, parse_script, simulate, DelayPolicy, GenConfig, Scheduler, ScriptStep, SimulateError, Status,
};
use tstkit_core::lang::{max_constant, parse_tst_file, render_tst, strict_input_guards, Tst};
use tstkit_core::rational::{int, parse_rational, Rational};
use tstkit_core::semantics::{replay_moves, Mode, SystemConfig, Trace};

use crate::corpus::write_corpus;
use crate::format::{
    config_from_json, endpoint_to_json, records_from_jsonl, trace_records, trace_to_jsonl, verdict_to_json, ConfigJson,
    EndpointJson, GenConfigJson, Record,
};
use crate::parallel::{run_corpus, thread_count};
use crate::report::{report_to_json, report_to_text, RunInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    Sync,
    Async,
}

impl From<Semantics> for Mode {
    fn from(s: Semantics) -> Mode {
        match s {
            Semantics::Sync => Mode::Sync,
            Semantics::Async => Mode::Async,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Midpoint,
    Boundary,
    Uniform,
}

impl From<Policy> for DelayPolicy {
    fn from(p: Policy) -> DelayPolicy {
        match p {
            Policy::Midpoint => DelayPolicy::Midpoint,
            Policy::Boundary => DelayPolicy::Boundary,
            Policy::Uniform => DelayPolicy::Uniform,
        }
    }
}

fn time_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).filter(|r| *r > int(0)).ok_or_else(|| format!("`{}` is not a positive time value", s))
}

#[derive(Debug, Parser)]
#[command(name = "tstkit", version, about = "Timed session types: semantics, compliance checking and simulation")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a `.tst` file and print it back in normal form.
    Fmt { file: PathBuf },
    /// Decide synchronous compliance of two terms.
    CheckSync {
        p: PathBuf,
        q: PathBuf,
        /// Extrapolate only the observer clock (may not terminate on
        /// recursive terms).
        #[arg(long)]
        no_extrapolation: bool,
        /// Write the counterexample, if any, as JSON lines.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Search for an asynchronous deadlock with bounded queues.
    CheckAsync {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 4)]
        queue_bound: usize,
        /// Cap on explored symbolic states.
        #[arg(long, default_value_t = 2000)]
        depth: usize,
        #[arg(long)]
        no_extrapolation: bool,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run the composition under a scheduler.
    Simulate {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value_t = Semantics::Sync)]
        semantics: Semantics,
        /// Seed of the random scheduler.
        #[arg(long, conflicts_with_all = ["script", "steps"])]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Policy::Boundary)]
        policy: Policy,
        /// Script file: a JSON-lines trace, or steps like `7,τ,τ`.
        #[arg(long, conflicts_with = "steps")]
        script: Option<PathBuf>,
        /// Inline script, e.g. `τ,τ,4,τ,1,τ`.
        #[arg(long)]
        steps: Option<String>,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Remainders and r-compliance of a configuration given as JSON.
    Remainder { config: PathBuf },
    /// Check the synchronous-to-asynchronous progress theorem on generated
    /// pairs.
    TheoremCorpus {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        queue_bound: usize,
        #[arg(long, default_value_t = 2000)]
        depth: usize,
        /// Generator settings as JSON.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory to persist the corpus and its manifest.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: TSTKIT_THREADS, then all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exhaustive search on a time grid, compared with the symbolic engine.
    Oracle {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value = "1/4", value_parser = time_arg)]
        granularity: Rational,
        /// Clock cap (default: largest constant plus one).
        #[arg(long, value_parser = time_arg)]
        horizon: Option<Rational>,
        #[arg(long, value_enum, default_value_t = Semantics::Sync)]
        semantics: Semantics,
        #[arg(long, default_value_t = 1_000_000)]
        node_cap: usize,
    },
}

/// A failure that ends the command with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

impl From<ComplianceError> for UsageError {
    fn from(e: ComplianceError) -> Self {
        usage(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: OutputFormat,
}

impl Io<'_> {
    fn text(&mut self, s: &str) {
        let _ = self.out.write_all(s.as_bytes());
    }

    fn json(&mut self, v: &impl Serialize) {
        let _ = writeln!(self.out, "{}", serde_json::to_string(v).expect("serializable output"));
    }

    fn warn(&mut self, s: &str) {
        let _ = writeln!(self.err, "warning: {}", s);
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err, format: cli.format };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {}", e);
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> CmdResult {
    match cmd {
        Command::Fmt { file } => fmt_cmd(&file, io),
        Command::CheckSync { p, q, no_extrapolation, trace_out } => {
            check_sync_cmd(&p, &q, !no_extrapolation, trace_out.as_deref(), io)
        }
        Command::CheckAsync { p, q, queue_bound, depth, no_extrapolation, trace_out } => {
            check_async_cmd(&p, &q, queue_bound, depth, !no_extrapolation, trace_out.as_deref(), io)
        }
        Command::Simulate { p, q, semantics, seed, policy, script, steps, max_steps, trace_out } => {
            let sched = scheduler(seed, policy, script.as_deref(), steps.as_deref(), &p, &q)?;
            simulate_cmd(&p, &q, semantics.into(), sched, max_steps, trace_out.as_deref(), io)
        }
        Command::Remainder { config } => remainder_cmd(&config, io),
        Command::TheoremCorpus { n, seed, queue_bound, depth, config, out, threads } => {
            theorem_cmd(n, seed, queue_bound, depth, config.as_deref(), out.as_deref(), threads, io)
        }
        Command::Oracle { p, q, granularity, horizon, semantics, node_cap } => {
            oracle_cmd(&p, &q, granularity, horizon, semantics.into(), node_cap, io)
        }
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

/// The single term of a `.tst` file.
pub fn load_term(path: &Path) -> Result<Tst, UsageError> {
    let defs = parse_tst_file(&read(path)?).map_err(|e| usage(format!("{}:{}", path.display(), e)))?;
    match defs.as_slice() {
        [one] => Ok(one.term.clone()),
        _ => Err(usage(format!("{}: expected exactly one term, found {}", path.display(), defs.len()))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), UsageError> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

fn warn_strict(io: &mut Io<'_>, path: &Path, p: &Tst) {
    for (a, g) in strict_input_guards(p) {
        io.warn(&format!(
            "{}: input `{}` has guard `{}` with a strict lower bound; under input urgency a queued `{}` may have no first instant at which it can be read",
            path.display(),
            a,
            g,
            a
        ));
    }
}

/// Initial configuration, moves, and the configuration reached.
fn trace_text(t: &Trace, mode: Mode) -> String {
    let mut s = format!("  {}\n", t.initial);
    let mut cur = t.initial.clone();
    for m in &t.moves {
        let _ = writeln!(s, "  --{}-->", m);
        match replay_moves(&cur, mode, std::slice::from_ref(m)) {
            Ok(next) => cur = next,
            Err(_) => {
                let _ = writeln!(s, "  (not enabled)");
                return s;
            }
        }
        let _ = writeln!(s, "  {}", cur);
    }
    s
}

fn emit_verdict(v: &Verdict, mode: Mode, trace_out: Option<&Path>, io: &mut Io<'_>) -> Result<(), UsageError> {
    if let (Some(path), Some(t)) = (trace_out, v.trace()) {
        write_file(path, &trace_to_jsonl(t))?;
    }
    match io.format {
        OutputFormat::Json => io.json(&verdict_to_json(v)),
        OutputFormat::Text => {
            let mut s = format!("{}\n", v);
            if let Some(t) = v.trace() {
                s += "counterexample:\n";
                s += &trace_text(t, mode);
            }
            io.text(&s);
        }
    }
    Ok(())
}

fn fmt_cmd(file: &Path, io: &mut Io<'_>) -> CmdResult {
    let defs = parse_tst_file(&read(file)?).map_err(|e| usage(format!("{}:{}", file.display(), e)))?;
    match io.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Def {
                name: Option<String>,
                term: String,
            }
            let defs: Vec<Def> = defs.iter().map(|d| Def { name: d.name.clone(), term: render_tst(&d.term) }).collect();
            io.json(&defs);
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for d in &defs {
                match &d.name {
                    Some(n) => {
                        let _ = writeln!(s, "{} = {}", n, d.term);
                    }
                    None => {
                        let _ = writeln!(s, "{}", d.term);
                    }
                }
            }
            io.text(&s);
        }
    }
    Ok(EXIT_OK)
}

fn check_sync_cmd(p: &Path, q: &Path, extrapolate: bool, trace_out: Option<&Path>, io: &mut Io<'_>) -> CmdResult {
    let (tp, tq) = (load_term(p)?, load_term(q)?);
    let v = check_sync_compliance_with(&tp, &tq, extrapolate)?;
    emit_verdict(&v, Mode::Sync, trace_out, io)?;
    Ok(if v == Verdict::Compliant { EXIT_OK } else { EXIT_NEGATIVE })
}

fn check_async_cmd(
    p: &Path,
    q: &Path,
    queue_bound: usize,
    depth: usize,
    extrapolate: bool,
    trace_out: Option<&Path>,
    io: &mut Io<'_>,
) -> CmdResult {
    let (tp, tq) = (load_term(p)?, load_term(q)?);
    warn_strict(io, p, &tp);
    warn_strict(io, q, &tq);
    let v = check_async_deadlock_with(&tp, &tq, queue_bound, depth, extrapolate)?;
    emit_verdict(&v, Mode::Async, trace_out, io)?;
    Ok(match v {
        Verdict::Deadlock(_) => EXIT_NEGATIVE,
        _ if v.is_inconclusive() => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    })
}

fn scheduler(
    seed: Option<u64>,
    policy: Policy,
    script: Option<&Path>,
    steps: Option<&str>,
    p: &Path,
    q: &Path,
) -> Result<Scheduler, UsageError> {
    if let Some(text) = steps {
        return parse_script(text).map(Scheduler::Scripted).map_err(|e| usage(e.to_string()));
    }
    let Some(path) = script else {
        return Ok(Scheduler::SeededRandom { seed: seed.unwrap_or(0), policy: policy.into() });
    };
    let text = read(path)?;
    if !text.trim_start().starts_with('{') {
        return parse_script(&text).map(Scheduler::Scripted).map_err(|e| usage(format!("{}: {}", path.display(), e)));
    }
    let (initial, moves) = records_from_jsonl(&text).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
    if let Some(init) = initial {
        let expected = SystemConfig::initial(load_term(p)?, load_term(q)?);
        if init != expected {
            return Err(usage(format!("{}: the trace starts from a different configuration", path.display())));
        }
    }
    Ok(Scheduler::Scripted(moves.into_iter().map(ScriptStep::Exact).collect()))
}

fn simulate_cmd(
    p: &Path,
    q: &Path,
    mode: Mode,
    sched: Scheduler,
    max_steps: usize,
    trace_out: Option<&Path>,
    io: &mut Io<'_>,
) -> CmdResult {
    let (tp, tq) = (load_term(p)?, load_term(q)?);
    if mode == Mode::Async {
        warn_strict(io, p, &tp);
        warn_strict(io, q, &tq);
    }
    let s = SystemConfig::initial(tp, tq);
    let run = match simulate(&s, &sched, mode, max_steps) {
        Ok(run) => run,
        Err(SimulateError::NotEnabled { position }) => {
            let _ = writeln!(io.err, "rejected: script step {} is not enabled", position);
            if io.format == OutputFormat::Json {
                io.json(&serde_json::json!({ "status": "rejected", "position": position }));
            }
            return Ok(EXIT_NEGATIVE);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    if let Some(path) = trace_out {
        write_file(path, &trace_to_jsonl(&run.trace))?;
    }
    match io.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                status: &'static str,
                trace: Vec<Record>,
            }
            io.json(&Out { status: run.status.name(), trace: trace_records(&run.trace) });
        }
        OutputFormat::Text => io.text(&format!("{}\n{}", run.status.name(), trace_text(&run.trace, mode))),
    }
    Ok(match run.status {
        Status::Success => EXIT_OK,
        Status::Deadlock => EXIT_NEGATIVE,
        Status::Budget => EXIT_INCONCLUSIVE,
    })
}

fn remainder_cmd(config: &Path, io: &mut Io<'_>) -> CmdResult {
    let cfg: ConfigJson =
        serde_json::from_str(&read(config)?).map_err(|e| usage(format!("{}: {}", config.display(), e)))?;
    let s = config_from_json(&cfg).map_err(|e| usage(format!("{}: {}", config.display(), e)))?;
    let left = remainder(&s.left, &s.right.queue);
    let right = remainder(&s.right, &s.left.queue);
    let ok = r_compliant(&s.left, &s.right)?;
    match io.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                left: Option<EndpointJson>,
                right: Option<EndpointJson>,
                r_compliant: bool,
            }
            io.json(&Out { left: left.as_ref().map(endpoint_to_json), right: right.as_ref().map(endpoint_to_json), r_compliant: ok });
        }
        OutputFormat::Text => {
            let show = |c: &Option<_>| match c {
                Some(c) => format!("{}", c),
                None => "undefined".to_string(),
            };
            io.text(&format!(
                "left remainder:  {}\nright remainder: {}\nr-compliant:     {}\n",
                show(&left),
                show(&right),
                if ok { "yes" } else { "no" }
            ));
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

#[allow(clippy::too_many_arguments)]
fn theorem_cmd(
    n: usize,
    seed: u64,
    queue_bound: usize,
    depth: usize,
    config: Option<&Path>,
    out_dir: Option<&Path>,
    threads: Option<usize>,
    io: &mut Io<'_>,
) -> CmdResult {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let cfg_json: GenConfigJson = match config {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {}", path.display(), e)))?,
        None => GenConfigJson::default(),
    };
    let cfg = GenConfig::from(&cfg_json);
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let report = run_corpus(n, &cfg, seed, queue_bound, depth, threads.unwrap_or_else(thread_count))?;
    if let Some(dir) = out_dir {
        write_corpus(dir, &report, seed, queue_bound, depth, &cfg_json).map_err(|e| usage(e.to_string()))?;
    }
    let info = RunInfo { seed, queue_bound, depth, config: &cfg_json };
    match io.format {
        OutputFormat::Json => io.json(&report_to_json(&report, &info)),
        OutputFormat::Text => io.text(&report_to_text(&report, &info)),
    }
    Ok(if report.counts.violations == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn oracle_cmd(
    p: &Path,
    q: &Path,
    granularity: Rational,
    horizon: Option<Rational>,
    mode: Mode,
    node_cap: usize,
    io: &mut Io<'_>,
) -> CmdResult {
    let (tp, tq) = (load_term(p)?, load_term(q)?);
    let top = [&tp, &tq].iter().flat_map(|t| max_constant(t).into_values()).max().unwrap_or(0);
    let horizon = horizon.unwrap_or_else(|| int(i64::from(top) + 1));
    let s = SystemConfig::initial(tp.clone(), tq.clone());
    let o = discretized_oracle(&s, granularity, horizon, mode, node_cap).map_err(|e| usage(e.to_string()))?;
    let engine = match mode {
        Mode::Sync => Some(sync_reachability(&tp, &tq)?),
        Mode::Async => None,
    };
    let agree = engine.as_ref().map(|e| e.success == o.success_reachable && e.deadlock == o.deadlock_reachable);
    match io.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Side {
                success_reachable: bool,
                deadlock_reachable: bool,
            }
            #[derive(Serialize)]
            struct Out {
                oracle: Side,
                nodes: usize,
                capped: bool,
                engine: Option<Side>,
                agreement: Option<bool>,
            }
            io.json(&Out {
                oracle: Side { success_reachable: o.success_reachable, deadlock_reachable: o.deadlock_reachable },
                nodes: o.nodes,
                capped: o.capped,
                engine: engine.as_ref().map(|e| Side { success_reachable: e.success, deadlock_reachable: e.deadlock }),
                agreement: agree,
            });
        }
        OutputFormat::Text => {
            let mut s = format!(
                "oracle: success {}, deadlock {} ({} nodes{})\n",
                reach(o.success_reachable),
                reach(o.deadlock_reachable),
                o.nodes,
                if o.capped { ", node cap reached" } else { "" }
            );
            if let Some(e) = &engine {
                let _ = writeln!(s, "engine: success {}, deadlock {}", reach(e.success), reach(e.deadlock));
                let _ = writeln!(s, "{}", if agree == Some(true) { "agree" } else { "DISAGREE" });
            }
            io.text(&s);
        }
    }
    Ok(if o.capped {
        EXIT_INCONCLUSIVE
    } else if agree == Some(false) {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    })
}

fn reach(b: bool) -> &'static str {
    if b {
        "reachable"
    } else {
        "unreachable"
    }
}
