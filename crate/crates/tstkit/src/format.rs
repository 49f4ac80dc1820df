//! JSON encodings of configurations, traces, verdicts and generator
//! settings. Times are exact rationals written as strings (`"7"`, `"9/4"`).
//!
//! A trace is JSON lines: an `initial` record followed by one record per
//! move.
//!
//! ```text
//! {"kind":"initial","left":{"term":"!a{t<=2}","queue":[],"valuation":{"t":"0"}},"right":{...}}
//! {"kind":"commit","actor":"left","action":"a"}
//! {"kind":"delay","delay":"4"}
//! {"kind":"sync","sender":"left","action":"a"}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tstkit_core::compliance::Verdict;
use tstkit_core::harness::GenConfig;
use tstkit_core::lang::{parse_tst, render_tst, Action, ParseError};
use tstkit_core::rational::{format_rational, parse_rational};
use tstkit_core::semantics::{EndpointConfig, Move, Side, SystemConfig, Trace};
use tstkit_core::time::{Clock, ClockValuation};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("bad term `{text}`: {source}")]
    Term { text: String, source: ParseError },
    #[error("bad time value `{0}`")]
    Time(String),
    #[error("unknown side `{0}`")]
    Side(String),
    #[error("a trace must start with an `initial` record")]
    MissingInitial,
    #[error("line {0}: a second `initial` record")]
    DuplicateInitial(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointJson {
    pub term: String,
    #[serde(default)]
    pub queue: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub left: EndpointJson,
    pub right: EndpointJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Record {
    Initial { left: EndpointJson, right: EndpointJson },
    Commit { actor: String, action: String },
    Sync { sender: String, action: String },
    Delay { delay: String },
}

pub fn endpoint_to_json(c: &EndpointConfig) -> EndpointJson {
    EndpointJson {
        term: render_tst(&c.term),
        queue: c.queue.iter().map(|a| a.name().to_string()).collect(),
        valuation: c.valuation.iter().map(|(k, v)| (k.name().to_string(), format_rational(v))).collect(),
    }
}

/// Reads an endpoint. Clocks of the term missing from the valuation start
/// at zero.
pub fn endpoint_from_json(e: &EndpointJson) -> Result<EndpointConfig, FormatError> {
    let term = parse_tst(&e.term).map_err(|source| FormatError::Term { text: e.term.clone(), source })?;
    let mut valuation = ClockValuation::zero(&tstkit_core::lang::clocks(&term));
    for (k, v) in &e.valuation {
        let value = parse_rational(v).filter(|x| *x >= 0.into()).ok_or_else(|| FormatError::Time(v.clone()))?;
        valuation.set(Clock::new(k.as_str()), value);
    }
    let queue = e.queue.iter().map(|a| Action::new(a.as_str())).collect();
    Ok(EndpointConfig::new(term, queue, valuation))
}

pub fn config_to_json(s: &SystemConfig) -> ConfigJson {
    ConfigJson { left: endpoint_to_json(&s.left), right: endpoint_to_json(&s.right) }
}

pub fn config_from_json(c: &ConfigJson) -> Result<SystemConfig, FormatError> {
    Ok(SystemConfig::new(endpoint_from_json(&c.left)?, endpoint_from_json(&c.right)?))
}

fn side_from(name: &str) -> Result<Side, FormatError> {
    match name {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(FormatError::Side(name.to_string())),
    }
}

pub fn move_to_record(m: &Move) -> Record {
    match m {
        Move::Commit { actor, action } => Record::Commit { actor: actor.name().into(), action: action.name().into() },
        Move::Sync { sender, action } => Record::Sync { sender: sender.name().into(), action: action.name().into() },
        Move::Delay(d) => Record::Delay { delay: format_rational(d) },
    }
}

fn record_to_move(r: &Record) -> Result<Option<Move>, FormatError> {
    Ok(Some(match r {
        Record::Initial { .. } => return Ok(None),
        Record::Commit { actor, action } => Move::Commit { actor: side_from(actor)?, action: Action::new(action.as_str()) },
        Record::Sync { sender, action } => Move::Sync { sender: side_from(sender)?, action: Action::new(action.as_str()) },
        Record::Delay { delay } => {
            Move::Delay(parse_rational(delay).filter(|d| *d > 0.into()).ok_or_else(|| FormatError::Time(delay.clone()))?)
        }
    }))
}

pub fn trace_records(t: &Trace) -> Vec<Record> {
    let c = config_to_json(&t.initial);
    std::iter::once(Record::Initial { left: c.left, right: c.right }).chain(t.moves.iter().map(move_to_record)).collect()
}

pub fn trace_to_jsonl(t: &Trace) -> String {
    trace_records(t)
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

/// Parses JSON-lines records. The initial record may be omitted, in which
/// case the moves come back without a configuration.
pub fn records_from_jsonl(text: &str) -> Result<(Option<SystemConfig>, Vec<Move>), FormatError> {
    let mut initial = None;
    let mut moves = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: Record = serde_json::from_str(line).map_err(|source| FormatError::Json { line: i + 1, source })?;
        match record_to_move(&r)? {
            Some(m) => moves.push(m),
            None => {
                if initial.is_some() || !moves.is_empty() {
                    return Err(FormatError::DuplicateInitial(i + 1));
                }
                if let Record::Initial { left, right } = r {
                    initial = Some(SystemConfig::new(endpoint_from_json(&left)?, endpoint_from_json(&right)?));
                }
            }
        }
    }
    Ok((initial, moves))
}

pub fn trace_from_jsonl(text: &str) -> Result<Trace, FormatError> {
    match records_from_jsonl(text)? {
        (Some(initial), moves) => Ok(Trace { initial, moves }),
        (None, _) => Err(FormatError::MissingInitial),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queue_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_hit: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Record>>,
}

pub fn verdict_to_json(v: &Verdict) -> VerdictJson {
    let mut out = VerdictJson {
        verdict: v.name().to_string(),
        queue_bound: None,
        depth: None,
        bound_hit: None,
        truncated: None,
        trace: v.trace().map(trace_records),
    };
    if let Verdict::NoDeadlockFoundUpTo { queue_bound, depth, bound_hit, truncated } = *v {
        out.queue_bound = Some(queue_bound);
        out.depth = Some(depth);
        out.bound_hit = Some(bound_hit);
        out.truncated = Some(truncated);
    }
    out
}

/// Generator settings; omitted fields take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfigJson {
    pub max_depth: u32,
    pub max_branches: u32,
    pub alphabet: u32,
    pub max_constant: u32,
    pub recursion: f64,
    pub strict_guards: bool,
    pub clocks: u32,
    pub reset: f64,
}

impl Default for GenConfigJson {
    fn default() -> Self {
        GenConfigJson::from(&GenConfig::default())
    }
}

impl From<&GenConfig> for GenConfigJson {
    fn from(c: &GenConfig) -> Self {
        GenConfigJson {
            max_depth: c.max_depth,
            max_branches: c.max_branches,
            alphabet: c.alphabet,
            max_constant: c.max_constant,
            recursion: c.recursion,
            strict_guards: c.strict_guards,
            clocks: c.clocks,
            reset: c.reset,
        }
    }
}

impl From<&GenConfigJson> for GenConfig {
    fn from(c: &GenConfigJson) -> Self {
        GenConfig {
            max_depth: c.max_depth,
            max_branches: c.max_branches,
            alphabet: c.alphabet,
            max_constant: c.max_constant,
            recursion: c.recursion,
            strict_guards: c.strict_guards,
            clocks: c.clocks,
            reset: c.reset,
        }
    }
}
