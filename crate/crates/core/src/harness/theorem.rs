use alloc::vec::Vec;

use super::generate::{generate_pair, GenConfig};
use crate::compliance::{check_async_deadlock_bounded, check_sync_compliance, ComplianceError, Verdict};
use crate::lang::Tst;

/// One generated pair and both verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub index: usize,
    pub seed: u64,
    pub p: Tst,
    pub q: Tst,
    pub sync: Verdict,
    pub asynchronous: Verdict,
    /// Synchronous compliance and absence of an asynchronous deadlock
    /// coincide.
    pub agreement: bool,
    pub bound_hit: bool,
}

impl PairRecord {
    /// Synchronously compliant yet asynchronously deadlocking.
    pub fn is_violation(&self) -> bool {
        matches!(self.sync, Verdict::Compliant) && matches!(self.asynchronous, Verdict::Deadlock(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
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

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<PairRecord>,
    pub counts: Counts,
}

impl Report {
    pub fn from_records(records: Vec<PairRecord>) -> Report {
        let mut c = Counts { pairs: records.len(), ..Counts::default() };
        for r in &records {
            match r.sync {
                Verdict::Compliant => c.sync_compliant += 1,
                _ => c.sync_not_compliant += 1,
            }
            match r.asynchronous {
                Verdict::Deadlock(_) => c.async_deadlock += 1,
                Verdict::NoDeadlockFoundUpTo { truncated, .. } => {
                    c.async_no_deadlock += 1;
                    c.truncated += usize::from(truncated);
                }
                _ => {}
            }
            c.bound_hit += usize::from(r.bound_hit);
            c.agreements += usize::from(r.agreement);
            c.violations += usize::from(r.is_violation());
        }
        Report { records, counts: c }
    }

    pub fn violations(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| r.is_violation())
    }
}

/// Seed of the `index`-th pair of a run seeded with `seed`.
pub fn pair_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Checks one pair under both semantics.
pub fn check_pair(index: usize, seed: u64, p: Tst, q: Tst, queue_bound: usize, depth: usize) -> Result<PairRecord, ComplianceError> {
    let sync = check_sync_compliance(&p, &q)?;
    let asynchronous = check_async_deadlock_bounded(&p, &q, queue_bound, depth)?;
    let bound_hit = matches!(asynchronous, Verdict::NoDeadlockFoundUpTo { bound_hit: true, .. });
    let agreement = matches!(sync, Verdict::Compliant) == matches!(asynchronous, Verdict::NoDeadlockFoundUpTo { .. });
    Ok(PairRecord { index, seed, p, q, sync, asynchronous, agreement, bound_hit })
}

/// Generates and checks the `index`-th pair of a run.
pub fn run_pair(cfg: &GenConfig, seed: u64, index: usize, queue_bound: usize, depth: usize) -> Result<PairRecord, ComplianceError> {
    let s = pair_seed(seed, index);
    let (p, q) = generate_pair(cfg, s);
    check_pair(index, s, p, q, queue_bound, depth)
}

/// Checks `n` generated pairs: whenever `p ⋈ q`, no asynchronous deadlock
/// may be found. Violations are kept in the report with their traces.
pub fn theorem_harness(n: usize, cfg: &GenConfig, seed: u64, queue_bound: usize, depth: usize) -> Result<Report, ComplianceError> {
    let records = (0..n).map(|i| run_pair(cfg, seed, i, queue_bound, depth)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report::from_records(records))
}
