//! Apartness on all pairs of tree nodes.
//!
//! Two nodes are apart when some input word is defined at both and produces
//! different outputs. The table is filled by a merge-scan over the sorted
//! children of each pair, memoized over pairs, so every pair is settled once
//! and the total work is quadratic in the tree size. Recursion is replaced by
//! an explicit stack so deep trees cannot overflow.

use super::{NodeId, ObservationTree};
use crate::error::{Error, Result};
use crate::word::{Input, Word};

const VISITED: u8 = 1;
const APART: u8 = 2;
// the separating input already differs in output here
const DIRECT: u8 = 4;

/// All-pairs apartness with witness links, stored for unordered pairs.
#[derive(Debug, Clone)]
pub struct ApartnessMatrix {
    n: usize,
    flags: Vec<u8>,
    link: Vec<Input>,
}

#[inline]
fn tri(q: NodeId, r: NodeId) -> usize {
    let (a, b) = if q < r { (q, r) } else { (r, q) };
    b * (b - 1) / 2 + a
}

struct Frame {
    q: NodeId,
    r: NodeId,
    lq: usize,
    lr: usize,
}

impl ApartnessMatrix {
    pub fn compute(tree: &ObservationTree) -> Self {
        let n = tree.len();
        let cells = n * n.saturating_sub(1) / 2;
        let mut m = ApartnessMatrix {
            n,
            flags: vec![0; cells],
            link: vec![Input(0); cells],
        };
        let mut stack = Vec::new();
        for r in 0..n {
            for q in 0..r {
                if m.flags[tri(q, r)] & VISITED == 0 {
                    m.settle(tree, q, r, &mut stack);
                }
            }
        }
        m
    }

    fn settle(&mut self, tree: &ObservationTree, q: NodeId, r: NodeId, stack: &mut Vec<Frame>) {
        stack.push(Frame { q, r, lq: 0, lr: 0 });
        while let Some(top) = stack.last_mut() {
            let cell = tri(top.q, top.r);
            let cq = tree.children(top.q);
            let cr = tree.children(top.r);
            let mut descend = None;
            while top.lq < cq.len() && top.lr < cr.len() && self.flags[cell] & APART == 0 {
                let (a, b) = (cq[top.lq], cr[top.lr]);
                let (ia, ib) = (tree.input(a).unwrap(), tree.input(b).unwrap());
                if ia < ib {
                    top.lq += 1;
                } else if ib < ia {
                    top.lr += 1;
                } else if tree.output(a) != tree.output(b) {
                    self.flags[cell] |= APART | DIRECT;
                    self.link[cell] = ia;
                } else {
                    let sub = tri(a, b);
                    if self.flags[sub] & VISITED == 0 {
                        descend = Some((a, b));
                        break;
                    }
                    if self.flags[sub] & APART != 0 {
                        self.flags[cell] |= APART;
                        self.link[cell] = ia;
                    }
                    top.lq += 1;
                    top.lr += 1;
                }
            }
            match descend {
                Some((a, b)) => stack.push(Frame {
                    q: a,
                    r: b,
                    lq: 0,
                    lr: 0,
                }),
                None => {
                    self.flags[cell] |= VISITED;
                    stack.pop();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_apart(&self, q: NodeId, r: NodeId) -> bool {
        q != r && self.flags[tri(q, r)] & APART != 0
    }

    /// A word defined at both nodes whose last output differs; it is the
    /// access path used by the scan, so it is not necessarily shortest.
    pub fn witness(&self, tree: &ObservationTree, q: NodeId, r: NodeId) -> Result<Word> {
        if !self.is_apart(q, r) {
            return Err(Error::NotApart(tree.access_string(q), tree.access_string(r)));
        }
        let (mut q, mut r) = (q, r);
        let mut w = Word::empty();
        loop {
            let cell = tri(q, r);
            let i = self.link[cell];
            w.push(i);
            if self.flags[cell] & DIRECT != 0 {
                return Ok(w);
            }
            q = tree.child(q, i).unwrap();
            r = tree.child(r, i).unwrap();
        }
    }

    /// Number of unordered apart pairs.
    pub fn count_apart(&self) -> usize {
        self.flags.iter().filter(|&&f| f & APART != 0).count()
    }
}
