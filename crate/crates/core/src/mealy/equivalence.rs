use std::collections::{HashMap, VecDeque};

use super::{check_same_inputs, output_bridge, MealyMachine, StateId};
use crate::error::Result;
use crate::word::{Input, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest word on which the two semantics differ, either in an
    /// output or in definedness.
    Counterexample(Word),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&Word> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Counterexample(w) => Some(w),
        }
    }
}

/// Breadth-first search over the product of `a` and `b` from `(qa, qb)`.
fn product_search(a: &MealyMachine, qa: StateId, b: &MealyMachine, qb: StateId) -> Option<Word> {
    let bridge = output_bridge(a.outputs(), b.outputs());
    let nb = b.num_states();
    let mut parent: HashMap<usize, (usize, Input)> = HashMap::new();
    let start = qa * nb + qb;
    let mut seen = vec![false; a.num_states() * nb];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let trace = |mut node: usize, last: Input, parent: &HashMap<usize, (usize, Input)>| {
        let mut w = vec![last];
        while node != start {
            let (p, i) = parent[&node];
            w.push(i);
            node = p;
        }
        w.reverse();
        Word::from(w)
    };
    while let Some(node) = queue.pop_front() {
        let (p, q) = (node / nb, node % nb);
        for i in a.inputs().inputs() {
            match (a.transition(p, i), b.transition(q, i)) {
                (None, None) => {}
                (Some((pt, po)), Some((qt, qo))) if po.0 as u32 == bridge[qo.index()] => {
                    let next = pt * nb + qt;
                    if !seen[next] {
                        seen[next] = true;
                        parent.insert(next, (node, i));
                        queue.push_back(next);
                    }
                }
                _ => return Some(trace(node, i, &parent)),
            }
        }
    }
    None
}

/// Language equivalence of the initial states.
pub fn equivalent(a: &MealyMachine, b: &MealyMachine) -> Result<Equivalence> {
    check_same_inputs(a, b)?;
    Ok(match product_search(a, a.initial(), b, b.initial()) {
        None => Equivalence::Equivalent,
        Some(w) => Equivalence::Counterexample(w),
    })
}

pub fn state_equivalent(a: &MealyMachine, qa: StateId, b: &MealyMachine, qb: StateId) -> Result<bool> {
    check_same_inputs(a, b)?;
    Ok(product_search(a, qa, b, qb).is_none())
}

/// Shortest word defined from both states on which their outputs differ.
pub fn separating_sequence(m: &MealyMachine, q: StateId, r: StateId) -> Option<Word> {
    if q == r {
        return None;
    }
    let n = m.num_states();
    let mut parent: HashMap<usize, (usize, Input)> = HashMap::new();
    let start = q * n + r;
    let mut seen = vec![false; n * n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let (p, s) = (node / n, node % n);
        for i in m.inputs().inputs() {
            let (Some((pt, po)), Some((st, so))) = (m.transition(p, i), m.transition(s, i)) else {
                continue;
            };
            if po != so {
                let mut w = vec![i];
                let mut cur = node;
                while cur != start {
                    let (pp, ii) = parent[&cur];
                    w.push(ii);
                    cur = pp;
                }
                w.reverse();
                return Some(w.into());
            }
            let next = pt * n + st;
            if !seen[next] {
                seen[next] = true;
                parent.insert(next, (node, i));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Moore-style refinement: the class index of every state under semantic
/// equivalence (definedness included). Classes are numbered by first
/// occurrence.
pub fn equivalence_classes(m: &MealyMachine) -> Vec<usize> {
    let n = m.num_states();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut index: HashMap<Vec<Option<(usize, u16)>>, usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in m.states() {
            let mut sig = Vec::with_capacity(m.num_inputs() + 1);
            sig.push(Some((class[q], 0)));
            sig.extend(
                m.inputs()
                    .inputs()
                    .map(|i| m.transition(q, i).map(|(t, o)| (class[t], o.0))),
            );
            let len = index.len();
            next[q] = *index.entry(sig).or_insert(len);
        }
        let new_count = index.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// No two distinct states are equivalent.
pub fn is_minimal(m: &MealyMachine) -> bool {
    let classes = equivalence_classes(m);
    let mut seen = vec![false; m.num_states()];
    classes.iter().all(|&c| !std::mem::replace(&mut seen[c], true))
}

pub(crate) fn find_equivalent_pair(m: &MealyMachine) -> Option<(StateId, StateId)> {
    let classes = equivalence_classes(m);
    let mut first: HashMap<usize, StateId> = HashMap::new();
    for q in m.states() {
        if let Some(&p) = first.get(&classes[q]) {
            return Some((p, q));
        }
        first.insert(classes[q], q);
    }
    None
}
