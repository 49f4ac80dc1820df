use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::ast::Tst;
use super::ops::unfold;

pub type TermId = usize;

/// The finite graph of unfolded terms reachable from a root, with each
/// branch's continuation resolved to a node.
#[derive(Clone, Debug)]
pub struct TermGraph {
    terms: Vec<Tst>,
    conts: Vec<Vec<TermId>>,
    index: BTreeMap<Tst, TermId>,
}

impl TermGraph {
    /// Builds the graph; the root is node 0.
    pub fn build(p: &Tst) -> TermGraph {
        let mut g = TermGraph { terms: Vec::new(), conts: Vec::new(), index: BTreeMap::new() };
        let root = unfold(p);
        g.intern(root);
        let mut todo: VecDeque<TermId> = VecDeque::from([0]);
        while let Some(id) = todo.pop_front() {
            let conts: Vec<Tst> = g.terms[id].branches().iter().map(|b| unfold(&b.cont)).collect();
            let mut ids = Vec::with_capacity(conts.len());
            for t in conts {
                let (cid, fresh) = g.intern(t);
                if fresh {
                    todo.push_back(cid);
                }
                ids.push(cid);
            }
            g.conts[id] = ids;
        }
        g
    }

    fn intern(&mut self, t: Tst) -> (TermId, bool) {
        if let Some(id) = self.index.get(&t) {
            return (*id, false);
        }
        let id = self.terms.len();
        self.index.insert(t.clone(), id);
        self.terms.push(t);
        self.conts.push(Vec::new());
        (id, true)
    }

    pub fn root(&self) -> TermId {
        0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: TermId) -> &Tst {
        &self.terms[id]
    }

    /// Node of the continuation of branch `branch` of node `id`.
    pub fn cont(&self, id: TermId, branch: usize) -> TermId {
        self.conts[id][branch]
    }

    /// Node of a term reachable from the root, if any.
    pub fn id_of(&self, t: &Tst) -> Option<TermId> {
        self.index.get(&unfold(t)).copied()
    }
}
