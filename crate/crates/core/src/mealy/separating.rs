//! State identifiers built from a splitting tree.
//!
//! The tree starts with one block holding every state. A block is split
//! either by the output of a single input, or by `i · w` where `i` sends the
//! block's states into different subtrees of an already split node with
//! separator `w`. Each state's identifier collects the separators on its
//! root-to-leaf path, so any two states share the separator of their lowest
//! common ancestor.

use std::collections::{BTreeMap, BTreeSet};

use super::{separating_sequence, MealyMachine, StateId};
use crate::error::{Error, Result};
use crate::word::{Output, Word};

/// One identifier set per specification state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingFamily {
    sets: Vec<BTreeSet<Word>>,
}

impl SeparatingFamily {
    pub fn new(sets: Vec<BTreeSet<Word>>) -> Self {
        SeparatingFamily { sets }
    }

    pub fn get(&self, q: StateId) -> &BTreeSet<Word> {
        &self.sets[q]
    }

    pub fn sets(&self) -> &[BTreeSet<Word>] {
        &self.sets
    }

    pub fn num_states(&self) -> usize {
        self.sets.len()
    }

    /// `⋃𝒲`
    pub fn flatten(&self) -> BTreeSet<Word> {
        self.sets.iter().flatten().cloned().collect()
    }

    /// Every state gets the flattened set, as the W-method does.
    pub fn uniform(&self) -> SeparatingFamily {
        let all = self.flatten();
        SeparatingFamily {
            sets: vec![all; self.sets.len()],
        }
    }

    fn separates(m: &MealyMachine, w: &Word, q: StateId, r: StateId) -> bool {
        match (m.run(q, w), m.run(r, w)) {
            (Some((_, a)), Some((_, b))) => a != b,
            _ => false,
        }
    }

    /// Each `W_q` contains a separating sequence for `q` and every other
    /// state (the machine is assumed minimal).
    pub fn check_identifiers(&self, m: &MealyMachine) -> Result<()> {
        for q in m.states() {
            for r in m.states().filter(|&r| r != q) {
                if !self.sets[q].iter().any(|w| Self::separates(m, w, q, r)) {
                    return Err(Error::InvalidIdentifier(m.state_name(q).into(), m.state_name(r).into()));
                }
            }
        }
        Ok(())
    }

    /// Every pair of distinct states has a separator in `W_q ∩ W_r`.
    pub fn check_harmonized(&self, m: &MealyMachine) -> Result<()> {
        for q in m.states() {
            for r in m.states().filter(|&r| r > q) {
                let ok = self.sets[q]
                    .intersection(&self.sets[r])
                    .any(|w| Self::separates(m, w, q, r));
                if !ok {
                    return Err(Error::NotHarmonized(m.state_name(q).into(), m.state_name(r).into()));
                }
            }
        }
        Ok(())
    }

    pub fn is_harmonized(&self, m: &MealyMachine) -> bool {
        self.check_harmonized(m).is_ok()
    }
}

struct Node {
    states: Vec<StateId>,
    parent: Option<usize>,
    depth: usize,
    separator: Option<Word>,
    children: Vec<usize>,
}

struct SplittingTree {
    nodes: Vec<Node>,
    leaf_of: Vec<usize>,
}

impl SplittingTree {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if self.nodes[a].depth >= self.nodes[b].depth {
                a = self.nodes[a].parent.unwrap();
            } else {
                b = self.nodes[b].parent.unwrap();
            }
        }
        a
    }

    fn best_split(&self, m: &MealyMachine, leaf: usize) -> Option<Word> {
        let states = &self.nodes[leaf].states;
        for i in m.inputs().inputs() {
            let o = m.output(states[0], i);
            if states.iter().any(|&q| m.output(q, i) != o) {
                return Some(vec![i].into());
            }
        }
        let mut best: Option<Word> = None;
        for i in m.inputs().inputs() {
            let mut target_leaf = states.iter().map(|&q| self.leaf_of[m.successor(q, i).unwrap()]);
            let first = target_leaf.next().unwrap();
            let lca = target_leaf.fold(first, |acc, l| self.lca(acc, l));
            if let Some(sep) = &self.nodes[lca].separator {
                let candidate = Word::from(vec![i]).concat(sep);
                if best.as_ref().is_none_or(|b| candidate.len() < b.len()) {
                    best = Some(candidate);
                }
            }
        }
        best
    }

    fn split(&mut self, m: &MealyMachine, leaf: usize, sep: Word) {
        let mut groups: BTreeMap<Vec<Output>, Vec<StateId>> = BTreeMap::new();
        for &q in &self.nodes[leaf].states {
            groups.entry(m.run(q, &sep).unwrap().1).or_default().push(q);
        }
        debug_assert!(groups.len() > 1);
        let depth = self.nodes[leaf].depth + 1;
        for (_, states) in groups {
            let id = self.nodes.len();
            for &q in &states {
                self.leaf_of[q] = id;
            }
            self.nodes.push(Node {
                states,
                parent: Some(leaf),
                depth,
                separator: None,
                children: Vec::new(),
            });
            self.nodes[leaf].children.push(id);
        }
        self.nodes[leaf].separator = Some(sep);
    }
}

fn build_splitting_tree(m: &MealyMachine) -> SplittingTree {
    let mut tree = SplittingTree {
        nodes: vec![Node {
            states: m.states().collect(),
            parent: None,
            depth: 0,
            separator: None,
            children: Vec::new(),
        }],
        leaf_of: vec![0; m.num_states()],
    };
    loop {
        // split the leaf admitting the shortest separator; ties go to the
        // earliest leaf
        let mut best: Option<(usize, Word)> = None;
        for (id, node) in tree.nodes.iter().enumerate() {
            if !node.children.is_empty() || node.states.len() < 2 {
                continue;
            }
            if let Some(sep) = tree.best_split(m, id) {
                if best.as_ref().is_none_or(|(_, b)| sep.len() < b.len()) {
                    best = Some((id, sep));
                }
            }
        }
        match best {
            Some((leaf, sep)) => tree.split(m, leaf, sep),
            None => return tree,
        }
    }
}

/// Identifier sets for a complete, minimal machine. The harmonized variant
/// keeps every separator on the state's path; otherwise each set is pruned
/// greedily to a subset still separating the state from all others.
pub fn separating_family(m: &MealyMachine, harmonized: bool) -> Result<SeparatingFamily> {
    m.require_complete()?;
    m.require_minimal()?;
    let tree = build_splitting_tree(m);
    let mut sets = Vec::with_capacity(m.num_states());
    for q in m.states() {
        let mut path = BTreeSet::new();
        let mut node = tree.nodes[tree.leaf_of[q]].parent;
        while let Some(id) = node {
            path.insert(tree.nodes[id].separator.clone().unwrap());
            node = tree.nodes[id].parent;
        }
        sets.push(if harmonized { path } else { prune(m, q, path) });
    }
    Ok(SeparatingFamily { sets })
}

fn prune(m: &MealyMachine, q: StateId, candidates: BTreeSet<Word>) -> BTreeSet<Word> {
    // a word separates whatever its prefixes separate
    let candidates: Vec<Word> = candidates
        .iter()
        .filter(|w| !candidates.iter().any(|x| x != *w && w.is_prefix_of(x)))
        .cloned()
        .collect();
    let mut uncovered: Vec<StateId> = m.states().filter(|&r| r != q).collect();
    let mut chosen = BTreeSet::new();
    while !uncovered.is_empty() {
        let (best, covered) = candidates
            .iter()
            .map(|w| {
                let c = uncovered
                    .iter()
                    .filter(|&&r| SeparatingFamily::separates(m, w, q, r))
                    .count();
                (w, c)
            })
            .max_by_key(|&(w, c)| (c, std::cmp::Reverse(w.len())))
            .expect("path separators cover every other state");
        debug_assert!(covered > 0);
        uncovered.retain(|&r| !SeparatingFamily::separates(m, best, q, r));
        chosen.insert(best.clone());
    }
    chosen
}

/// Pairwise shortest separators; used when no refinement order is wanted.
pub fn pairwise_family(m: &MealyMachine) -> SeparatingFamily {
    let mut sets = vec![BTreeSet::new(); m.num_states()];
    for q in m.states() {
        for r in m.states().filter(|&r| r > q) {
            if let Some(w) = separating_sequence(m, q, r) {
                sets[q].insert(w.clone());
                sets[r].insert(w);
            }
        }
    }
    SeparatingFamily { sets }
}
