//! Theorem-corpus reports as JSON and as a text table.

use std::fmt::Write as _;

use serde::Serialize;
use tstkit_core::harness::{Counts, PairRecord, Report};
use tstkit_core::lang::render_tst;

use crate::format::{verdict_to_json, GenConfigJson, VerdictJson};

#[derive(Debug, Serialize)]
pub struct PairJson {
    pub index: usize,
    pub seed: u64,
    pub p: String,
    pub q: String,
    pub sync: VerdictJson,
    #[serde(rename = "async")]
    pub asynchronous: VerdictJson,
    pub agreement: bool,
    pub bound_hit: bool,
    pub violation: bool,
}

#[derive(Debug, Serialize)]
pub struct CountsJson {
    pub pairs: usize,
    pub sync_compliant: usize,
    pub sync_not_compliant: usize,
    pub async_deadlock: usize,
    pub async_no_deadlock: usize,
    pub bound_hit: usize,
    pub truncated: usize,
    pub agreements: usize,
    pub violations: usize,
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub seed: u64,
    pub queue_bound: usize,
    pub depth: usize,
    pub config: GenConfigJson,
    pub counts: CountsJson,
    pub pairs: Vec<PairJson>,
}

pub fn pair_to_json(r: &PairRecord) -> PairJson {
    PairJson {
        index: r.index,
        seed: r.seed,
        p: render_tst(&r.p),
        q: render_tst(&r.q),
        sync: verdict_to_json(&r.sync),
        asynchronous: verdict_to_json(&r.asynchronous),
        agreement: r.agreement,
        bound_hit: r.bound_hit,
        violation: r.is_violation(),
    }
}

fn counts_to_json(c: &Counts) -> CountsJson {
    CountsJson {
        pairs: c.pairs,
        sync_compliant: c.sync_compliant,
        sync_not_compliant: c.sync_not_compliant,
        async_deadlock: c.async_deadlock,
        async_no_deadlock: c.async_no_deadlock,
        bound_hit: c.bound_hit,
        truncated: c.truncated,
        agreements: c.agreements,
        violations: c.violations,
    }
}

pub struct RunInfo<'a> {
    pub seed: u64,
    pub queue_bound: usize,
    pub depth: usize,
    pub config: &'a GenConfigJson,
}

pub fn report_to_json(report: &Report, info: &RunInfo<'_>) -> ReportJson {
    ReportJson {
        seed: info.seed,
        queue_bound: info.queue_bound,
        depth: info.depth,
        config: info.config.clone(),
        counts: counts_to_json(&report.counts),
        pairs: report.records.iter().map(pair_to_json).collect(),
    }
}

/// Summary table, followed by every violation with its trace.
pub fn report_to_text(report: &Report, info: &RunInfo<'_>) -> String {
    let c = &report.counts;
    let mut s = String::new();
    let _ = writeln!(s, "seed {}  queue bound {}  depth {}", info.seed, info.queue_bound, info.depth);
    let rows = [
        ("pairs", c.pairs),
        ("sync compliant", c.sync_compliant),
        ("sync not compliant", c.sync_not_compliant),
        ("async deadlock", c.async_deadlock),
        ("async no deadlock found", c.async_no_deadlock),
        ("queue bound hit", c.bound_hit),
        ("depth exhausted", c.truncated),
        ("agreements", c.agreements),
        ("violations", c.violations),
    ];
    for (name, n) in rows {
        let _ = writeln!(s, "{:<24}{:>8}", name, n);
    }
    for r in report.violations() {
        let _ = writeln!(s, "\nviolation at pair {} (seed {})\n  p = {}\n  q = {}", r.index, r.seed, r.p, r.q);
        if let Some(t) = r.asynchronous.trace() {
            let _ = write!(s, "{}", crate::format::trace_to_jsonl(t));
        }
    }
    s
}
