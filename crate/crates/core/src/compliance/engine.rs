//! Zone-graph exploration shared by the synchronous checker and the bounded
//! asynchronous search.
//!
//! A location fixes both terms and both queues; the zone ranges over the
//! clocks of both endpoints plus an observer clock that is never reset (its
//! differences recover concrete delays when a counterexample is rebuilt).

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::ComplianceError;
use crate::lang::{clocks, max_constant, Action, Queue, TermGraph, TermId, Tst};
use crate::rational::Rational;
use crate::semantics::{allowed_delays, apply_move, replay_moves, EndpointConfig, Mode, Move, Side, SystemConfig, Trace};
use crate::time::{
    guard_zones, urgent_elapse_within, DelayInterval, urgent_pred, Bound, Clock, ClockId, ClockValuation, CmpOp, Dbm, Guard, Owner,
    Universe, ZoneSet,
};

const OBSERVER: &str = "now";

fn ix(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

const SIDES: [Side; 2] = [Side::Left, Side::Right];

/// Control part of a symbolic state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub terms: [TermId; 2],
    pub queues: [Queue; 2],
}

impl Location {
    pub fn term(&self, side: Side) -> TermId {
        self.terms[ix(side)]
    }

    pub fn queue(&self, side: Side) -> &Queue {
        &self.queues[ix(side)]
    }
}

/// A location with a convex zone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicState {
    pub location: Location,
    pub zone: Dbm,
}

/// A discrete symbolic edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// `side` commits to branch `branch` of its internal choice.
    Commit { side: Side, branch: usize },
    /// `sender`'s queue head is read by branch `branch` of the partner.
    Sync { sender: Side, branch: usize },
}

struct BranchData {
    guard: ZoneSet,
    resets: Vec<usize>,
}

/// Per-location timing data.
#[derive(Clone, Debug)]
pub struct LocInfo {
    /// Valuations with a `τ` step enabled now.
    pub enabled: ZoneSet,
    /// Valuations at which a queue head can be read (asynchronous only).
    pub sync: ZoneSet,
    /// Valuations both endpoints may delay into (past-closed).
    pub delay: ZoneSet,
    /// Valuations from which a `τ` is reachable now or after a delay.
    pub nonstuck: ZoneSet,
    pub success: bool,
}

pub(crate) struct Outcome {
    pub deadlock: Option<Trace>,
    pub bound_hit: bool,
    pub truncated: bool,
    pub success: bool,
    pub states: usize,
}

/// Exploration settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Longest queue kept (1 for the synchronous relation).
    pub queue_bound: usize,
    /// Cap on the number of symbolic states explored.
    pub max_states: Option<usize>,
    /// Apply maximal-constant extrapolation to the endpoint clocks.
    pub extrapolate: bool,
    /// Keep exploring after the first deadlock.
    pub exhaustive: bool,
}

pub struct Explorer {
    mode: Mode,
    graphs: [TermGraph; 2],
    originals: [Tst; 2],
    universe: Universe,
    max: Vec<u32>,
    diagonals: Vec<(usize, usize, Bound)>,
    branches: [Vec<Vec<BranchData>>; 2],
    rdy: [Vec<ZoneSet>; 2],
    observer: usize,
}

fn diagonal_constraints(g: &Guard, universe: &Universe, owner: Owner, out: &mut Vec<(usize, usize, Bound)>) {
    g.visit_atoms(&mut |atom| {
        if let Guard::Diag(x, y, op, d) = atom {
            let (Some(i), Some(j)) = (universe.index(owner, x), universe.index(owner, y)) else {
                return;
            };
            let d = Rational::from_integer(*d as i64);
            let cs: Vec<(usize, usize, Bound)> = match op {
                CmpOp::Lt => vec![(i, j, Bound::lt(d))],
                CmpOp::Le => vec![(i, j, Bound::le(d))],
                CmpOp::Eq => vec![(i, j, Bound::le(d)), (j, i, Bound::le(-d))],
                CmpOp::Ge => vec![(j, i, Bound::le(-d))],
                CmpOp::Gt => vec![(j, i, Bound::lt(-d))],
            };
            for c in cs {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    });
}

impl Explorer {
    pub fn new(mode: Mode, p: &Tst, q: &Tst) -> Result<Explorer, ComplianceError> {
        for (side, t) in [(Side::Left, p), (Side::Right, q)] {
            crate::lang::validate(t).map_err(|errors| ComplianceError::Invalid { side, errors })?;
        }
        let graphs = [TermGraph::build(p), TermGraph::build(q)];
        let mut ids = Vec::new();
        for (side, t) in [(Side::Left, p), (Side::Right, q)] {
            ids.extend(clocks(t).into_iter().map(|c| ClockId { owner: side.owner(), clock: c }));
        }
        ids.push(ClockId { owner: Owner::Observer, clock: Clock::new(OBSERVER) });
        let universe = Universe::new(ids);
        let observer = universe.index(Owner::Observer, &Clock::new(OBSERVER)).expect("observer clock");
        let mut max = vec![0u32; universe.dim()];
        for (side, t) in [(Side::Left, p), (Side::Right, q)] {
            for (c, m) in max_constant(t) {
                if let Some(i) = universe.index(side.owner(), &c) {
                    max[i] = m;
                }
            }
        }
        let mut diagonals = Vec::new();
        let mut branches: [Vec<Vec<BranchData>>; 2] = [Vec::new(), Vec::new()];
        let mut rdy: [Vec<ZoneSet>; 2] = [Vec::new(), Vec::new()];
        for side in SIDES {
            let g = &graphs[ix(side)];
            for id in 0..g.len() {
                let term = g.term(id);
                let mut data = Vec::new();
                for b in term.branches() {
                    diagonal_constraints(&b.guard, &universe, side.owner(), &mut diagonals);
                    let resets = b
                        .resets
                        .iter()
                        .map(|c| universe.index_of(side.owner(), c))
                        .collect::<Result<Vec<_>, _>>()?;
                    data.push(BranchData { guard: guard_zones(&b.guard, &universe, side.owner())?, resets });
                }
                branches[ix(side)].push(data);
                rdy[ix(side)].push(crate::semantics::rdy(term, &universe, side.owner())?);
            }
        }
        Ok(Explorer {
            mode,
            graphs,
            originals: [p.clone(), q.clone()],
            universe,
            max,
            diagonals,
            branches,
            rdy,
            observer,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn graph(&self, side: Side) -> &TermGraph {
        &self.graphs[ix(side)]
    }

    pub fn initial_location(&self) -> Location {
        Location { terms: [0, 0], queues: [Queue::new(), Queue::new()] }
    }

    /// The point of the universe for two endpoint valuations (observer at 0).
    pub fn point(&self, left: &ClockValuation, right: &ClockValuation) -> Result<Vec<Rational>, ComplianceError> {
        Ok(self.universe.point(|id| match id.owner {
            Owner::Left => left.get(&id.clock),
            Owner::Right => right.get(&id.clock),
            Owner::Observer => Some(Rational::zero()),
        })?)
    }

    fn term(&self, side: Side, id: TermId) -> &Tst {
        self.graphs[ix(side)].term(id)
    }

    pub fn loc_info(&self, loc: &Location) -> LocInfo {
        let dim = self.universe.dim();
        let mut enabled = ZoneSet::empty(dim);
        let mut sync = ZoneSet::empty(dim);
        for side in SIDES {
            let me = loc.term(side);
            if self.mode == Mode::Async || loc.queue(side).is_empty() {
                if let Tst::Internal(_) = self.term(side, me) {
                    for b in &self.branches[ix(side)][me] {
                        enabled = enabled.join(&b.guard);
                    }
                }
            }
            if let Some(head) = loc.queue(side).front() {
                let other = side.other();
                if self.mode == Mode::Async || loc.queue(other).is_empty() {
                    if let Some(k) = self.input_branch(other, loc.term(other), head) {
                        let g = &self.branches[ix(other)][loc.term(other)][k].guard;
                        enabled = enabled.join(g);
                        if self.mode == Mode::Async {
                            sync = sync.join(g);
                        }
                    }
                }
            }
        }
        let delay = if self.mode == Mode::Sync && !(loc.queues[0].is_empty() && loc.queues[1].is_empty()) {
            ZoneSet::empty(dim)
        } else {
            self.rdy[0][loc.terms[0]].meet(&self.rdy[1][loc.terms[1]])
        };
        let nonstuck = enabled.join(&urgent_pred(&enabled.meet(&delay), &sync));
        let success = loc.queues.iter().all(|q| q.is_empty())
            && SIDES.iter().all(|s| *self.term(*s, loc.term(*s)) == Tst::Success);
        LocInfo { enabled, sync, delay, nonstuck, success }
    }

    fn input_branch(&self, side: Side, id: TermId, action: &Action) -> Option<usize> {
        match self.term(side, id) {
            Tst::External(bs) => bs.iter().position(|b| b.action() == action),
            _ => None,
        }
    }

    /// Closes a zone under the delays permitted at the location.
    pub fn elapse(&self, info: &LocInfo, z: &ZoneSet) -> ZoneSet {
        match self.mode {
            Mode::Sync => z.join(&z.future(false).meet(&info.delay)),
            Mode::Async => urgent_elapse_within(z, &info.sync, &info.delay),
        }
    }

    fn coarsen(&self, z: &ZoneSet, extrapolate: bool) -> ZoneSet {
        if extrapolate {
            z.extrapolate_split(&self.max, &self.diagonals)
        } else {
            // the observer is never compared, so forgetting its value is exact
            let mut max: Vec<u32> = vec![u32::MAX / 4; self.max.len()];
            max[self.observer] = 0;
            z.extrapolate(&max)
        }
    }

    /// Discrete edges out of a location, with their targets. Commits that
    /// would overflow `queue_bound` are left out and flagged.
    pub fn edges(&self, loc: &Location, queue_bound: usize) -> (Vec<(Edge, Location, Move)>, bool) {
        let mut out = Vec::new();
        let mut overflow = false;
        for side in SIDES {
            let me = loc.term(side);
            if let Tst::Internal(bs) = self.term(side, me) {
                if self.mode == Mode::Async || loc.queue(side).is_empty() {
                    for (k, b) in bs.iter().enumerate() {
                        if loc.queue(side).len() >= queue_bound {
                            overflow = true;
                            continue;
                        }
                        let mut next = loc.clone();
                        next.terms[ix(side)] = self.graphs[ix(side)].cont(me, k);
                        next.queues[ix(side)].push_back(b.action().clone());
                        out.push((
                            Edge::Commit { side, branch: k },
                            next,
                            Move::Commit { actor: side, action: b.action().clone() },
                        ));
                    }
                }
            }
            if let Some(head) = loc.queue(side).front() {
                let other = side.other();
                if self.mode == Mode::Sync && !loc.queue(other).is_empty() {
                    continue;
                }
                if let Some(k) = self.input_branch(other, loc.term(other), head) {
                    let mut next = loc.clone();
                    next.queues[ix(side)].pop_front();
                    next.terms[ix(other)] = self.graphs[ix(other)].cont(loc.term(other), k);
                    out.push((Edge::Sync { sender: side, branch: k }, next, Move::Sync { sender: side, action: head.clone() }));
                }
            }
        }
        (out, overflow)
    }

    fn edge_branch(&self, loc: &Location, edge: Edge) -> &BranchData {
        match edge {
            Edge::Commit { side, branch } => &self.branches[ix(side)][loc.term(side)][branch],
            Edge::Sync { sender, branch } => {
                let other = sender.other();
                &self.branches[ix(other)][loc.term(other)][branch]
            }
        }
    }

    /// Zone right after taking `edge` from the (time-closed) zone `w`.
    pub fn fire(&self, loc: &Location, edge: Edge, w: &ZoneSet) -> ZoneSet {
        let b = self.edge_branch(loc, edge);
        w.meet(&b.guard).reset(&b.resets)
    }

    /// Successors of a symbolic state: fire each edge, let time pass at the
    /// target, extrapolate.
    pub fn successors(&self, state: &SymbolicState, limits: &SearchLimits) -> Vec<SymbolicState> {
        let w = ZoneSet::from_dbm(state.zone.clone());
        let mut out = Vec::new();
        for (edge, next, _) in self.edges(&state.location, limits.queue_bound).0 {
            let z = self.fire(&state.location, edge, &w);
            if z.is_empty() {
                continue;
            }
            let info = self.loc_info(&next);
            let closed = self.coarsen(&self.elapse(&info, &z), limits.extrapolate);
            for d in closed.members() {
                out.push(SymbolicState { location: next.clone(), zone: d.clone() });
            }
        }
        out
    }

    /// Breadth-first search for a reachable deadlock from `init`.
    pub(crate) fn search(
        &self,
        init: &[Rational],
        initial: &SystemConfig,
        limits: &SearchLimits,
    ) -> Result<Outcome, ComplianceError> {
        struct Node {
            state: SymbolicState,
            parent: Option<(usize, Edge, Move)>,
        }
        let mut infos: BTreeMap<Location, LocInfo> = BTreeMap::new();
        let mut passed: BTreeMap<Location, Vec<Dbm>> = BTreeMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut todo: VecDeque<usize> = VecDeque::new();
        let mut bound_hit = false;
        let mut truncated = false;
        let mut success = false;
        let mut deadlock = None;

        let loc0 = self.initial_location();
        let info0 = self.loc_info(&loc0);
        let w0 = self.coarsen(&self.elapse(&info0, &ZoneSet::from_point(init)), limits.extrapolate);
        infos.insert(loc0.clone(), info0);
        for d in w0.members() {
            passed.entry(loc0.clone()).or_default().push(d.clone());
            nodes.push(Node { state: SymbolicState { location: loc0.clone(), zone: d.clone() }, parent: None });
            todo.push_back(nodes.len() - 1);
        }

        let mut explored = 0usize;
        while let Some(n) = todo.pop_front() {
            if limits.max_states.is_some_and(|cap| explored >= cap) {
                truncated = true;
                break;
            }
            explored += 1;
            let loc = nodes[n].state.location.clone();
            let info = infos.entry(loc.clone()).or_insert_with(|| self.loc_info(&loc)).clone();
            let w = ZoneSet::from_dbm(nodes[n].state.zone.clone());
            success |= info.success;
            if deadlock.is_none() && !info.success && !w.subtract(&info.nonstuck).is_empty() {
                let mut path = Vec::new();
                let mut cur = n;
                while let Some((parent, edge, mv)) = nodes[cur].parent.clone() {
                    path.push((nodes[parent].state.location.clone(), edge, mv));
                    cur = parent;
                }
                path.reverse();
                deadlock = Some(self.witness(init, initial, &path, &loc)?);
                if !limits.exhaustive {
                    break;
                }
            }
            let (edges, overflow) = self.edges(&loc, limits.queue_bound);
            bound_hit |= overflow;
            for (edge, next, mv) in edges {
                let z = self.fire(&loc, edge, &w);
                if z.is_empty() {
                    continue;
                }
                let info = infos.entry(next.clone()).or_insert_with(|| self.loc_info(&next));
                let closed = self.coarsen(&self.elapse(info, &z), limits.extrapolate);
                let seen = passed.entry(next.clone()).or_default();
                for d in closed.members() {
                    if seen.iter().any(|s| s.includes(d)) {
                        continue;
                    }
                    seen.retain(|s| !d.includes(s));
                    seen.push(d.clone());
                    nodes.push(Node {
                        state: SymbolicState { location: next.clone(), zone: d.clone() },
                        parent: Some((n, edge, mv.clone())),
                    });
                    todo.push_back(nodes.len() - 1);
                }
            }
        }
        Ok(Outcome { deadlock, bound_hit, truncated, success, states: explored })
    }

    /// Rebuilds a concrete run along `path` that ends in a deadlock at
    /// `last`, replaying the path on exact zones and picking witnesses
    /// backwards.
    fn witness(
        &self,
        init: &[Rational],
        initial: &SystemConfig,
        path: &[(Location, Edge, Move)],
        last: &Location,
    ) -> Result<Trace, ComplianceError> {
        let mut zs = vec![ZoneSet::from_point(init)];
        let mut ws = Vec::new();
        let mut infos = Vec::new();
        for (loc, edge, _) in path {
            let info = self.loc_info(loc);
            let w = self.elapse(&info, zs.last().expect("zone"));
            zs.push(self.fire(loc, *edge, &w));
            ws.push(w);
            infos.push(info);
        }
        let info = self.loc_info(last);
        let w = self.elapse(&info, zs.last().expect("zone"));
        let stuck = w.subtract(&info.nonstuck);
        ws.push(w);
        infos.push(info);
        let mut target = stuck.pick_point().ok_or(ComplianceError::Witness("empty stuck set"))?;

        let n = path.len();
        let mut delays = vec![Rational::zero(); n + 1];
        for i in (0..=n).rev() {
            let start = if zs[i].contains(&target) {
                target.clone()
            } else {
                let t = ZoneSet::from_point(&target);
                let blocked = infos[i].sync.meet(&t.past_strict()).past();
                zs[i]
                    .meet(&t.past())
                    .subtract(&blocked)
                    .pick_point()
                    .ok_or(ComplianceError::Witness("no delay predecessor"))?
            };
            delays[i] = target[self.observer - 1] - start[self.observer - 1];
            if i == 0 {
                break;
            }
            let (loc, edge, _) = &path[i - 1];
            let b = self.edge_branch(loc, *edge);
            target = ZoneSet::from_point(&start)
                .free(&b.resets)
                .meet(&ws[i - 1])
                .meet(&b.guard)
                .pick_point()
                .ok_or(ComplianceError::Witness("no discrete predecessor"))?;
        }

        let mut moves = Vec::new();
        for i in 0..=n {
            if delays[i] > Rational::zero() {
                moves.push(Move::Delay(delays[i]));
            }
            if i < n {
                moves.push(path[i].2.clone());
            }
        }
        let mut trace = Trace { initial: initial.clone(), moves };
        let end = replay_moves(&trace.initial, self.mode, &trace.moves)
            .map_err(|_| ComplianceError::Witness("counterexample does not replay"))?;
        if !super::is_deadlock(&end, self.mode) {
            return Err(ComplianceError::Witness("counterexample does not end in a deadlock"));
        }
        // Let time run to the last instant it can reach, when there is one.
        if let DelayInterval::UpTo { bound, inclusive: true } = allowed_delays(&end, self.mode) {
            let last = Move::Delay(bound);
            if apply_move(&end, self.mode, &last).is_some_and(|c| super::is_deadlock(&c, self.mode)) {
                trace.moves.push(last);
            }
        }
        Ok(trace)
    }

    /// `(p, ∅, ν₀) | (q, ∅, η₀)` for the explored terms.
    pub fn initial_config(&self, left: ClockValuation, right: ClockValuation) -> SystemConfig {
        SystemConfig::new(
            EndpointConfig::new(self.originals[0].clone(), Queue::new(), left),
            EndpointConfig::new(self.originals[1].clone(), Queue::new(), right),
        )
    }
}
