//! Observation trees and testing trees.
//!
//! Nodes live in an arena numbered in depth-first preorder with children
//! visited in input order, so a parent always precedes its children and the
//! root is node 0.

mod apartness;
mod basis;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mealy::{output_bridge, MealyMachine, StateId};
use crate::suite::TestSuite;
use crate::word::{Alphabet, Input, Output, Word};

pub use apartness::ApartnessMatrix;
pub use basis::{
    basis_from_cover, strata_completeness, BasisStratification, CandidateSet, IncompleteNode, StrataCompleteness,
};

pub type NodeId = usize;

/// Default cap on the number of tree nodes.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct TreeNode {
    parent: Option<NodeId>,
    input: Option<Input>,
    output: Option<Output>,
    depth: usize,
    // sorted by input
    children: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationTree {
    inputs: Alphabet,
    outputs: Alphabet,
    nodes: Vec<TreeNode>,
    spec_state: Vec<Option<StateId>>,
}

impl ObservationTree {
    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn parent(&self, q: NodeId) -> Option<NodeId> {
        self.nodes[q].parent
    }

    /// Input on the incoming edge; absent for the root.
    pub fn input(&self, q: NodeId) -> Option<Input> {
        self.nodes[q].input
    }

    /// Output on the incoming edge; absent for the root.
    pub fn output(&self, q: NodeId) -> Option<Output> {
        self.nodes[q].output
    }

    pub fn depth(&self, q: NodeId) -> usize {
        self.nodes[q].depth
    }

    pub fn children(&self, q: NodeId) -> &[NodeId] {
        &self.nodes[q].children
    }

    pub fn child(&self, q: NodeId, i: Input) -> Option<NodeId> {
        let ch = &self.nodes[q].children;
        ch.binary_search_by(|&c| self.nodes[c].input.unwrap().cmp(&i))
            .ok()
            .map(|p| ch[p])
    }

    /// Spec state this node was built from, if any.
    pub fn spec_state(&self, q: NodeId) -> Option<StateId> {
        self.spec_state[q]
    }

    pub fn access(&self, q: NodeId) -> Word {
        let mut w = Vec::with_capacity(self.nodes[q].depth);
        let mut cur = q;
        while let Some(p) = self.nodes[cur].parent {
            w.push(self.nodes[cur].input.unwrap());
            cur = p;
        }
        w.reverse();
        w.into()
    }

    pub(crate) fn inputs_display(&self, w: &[Input]) -> String {
        Word::from(w.to_vec()).display(&self.inputs).to_string()
    }

    pub fn access_string(&self, q: NodeId) -> String {
        self.access(q).display(&self.inputs).to_string()
    }

    pub fn node_of(&self, word: &[Input]) -> Option<NodeId> {
        word.iter().try_fold(self.root(), |q, &i| self.child(q, i))
    }

    /// Inputs without an outgoing edge at `q`.
    pub fn missing_inputs(&self, q: NodeId) -> Vec<Input> {
        self.inputs.inputs().filter(|&i| self.child(q, i).is_none()).collect()
    }

    pub fn is_node_complete(&self, q: NodeId) -> bool {
        self.nodes[q].children.len() == self.inputs.len()
    }

    /// `q →+ r`: `r` is a proper descendant of `q`.
    pub fn is_proper_ancestor(&self, q: NodeId, r: NodeId) -> bool {
        let mut cur = r;
        while let Some(p) = self.nodes[cur].parent {
            if p == q {
                return true;
            }
            if self.nodes[p].depth < self.nodes[q].depth {
                return false;
            }
            cur = p;
        }
        false
    }

    /// The maximal access words, i.e. the normalized suite this tree encodes.
    pub fn leaves_as_suite(&self) -> TestSuite {
        self.nodes()
            .filter(|&q| self.nodes[q].children.is_empty() && q != self.root())
            .map(|q| self.access(q))
            .collect()
    }

    /// The tree as a partial Mealy machine; states are named by node index.
    pub fn to_machine(&self) -> MealyMachine {
        let names = self.nodes().map(|q| format!("n{q}")).collect();
        let mut m =
            MealyMachine::new(self.inputs.clone(), self.outputs.clone(), names, 0).expect("node names are unique");
        for q in self.nodes().skip(1) {
            let n = &self.nodes[q];
            m.set_transition(n.parent.unwrap(), n.input.unwrap(), Some((q, n.output.unwrap())));
        }
        m
    }

    /// Applies the apartness algorithm to this tree.
    pub fn apartness(&self) -> ApartnessMatrix {
        ApartnessMatrix::compute(self)
    }
}

/// `Tree(S, T)`: nodes are `{ε} ∪ Pref(T)`, outputs come from `spec`.
pub fn build_testing_tree(spec: &MealyMachine, suite: &TestSuite) -> Result<ObservationTree> {
    build_testing_tree_with_budget(spec, suite, DEFAULT_NODE_BUDGET)
}

pub fn build_testing_tree_with_budget(
    spec: &MealyMachine,
    suite: &TestSuite,
    budget: usize,
) -> Result<ObservationTree> {
    // trie in insertion order: (children by input, output, spec state)
    struct Raw {
        children: BTreeMap<Input, usize>,
        output: Option<Output>,
        state: StateId,
    }
    let mut raw = vec![Raw {
        children: BTreeMap::new(),
        output: None,
        state: spec.initial(),
    }];
    for test in suite.maximal() {
        let mut cur = 0;
        for (n, &i) in test.iter().enumerate() {
            if let Some(&c) = raw[cur].children.get(&i) {
                cur = c;
                continue;
            }
            let (t, o) = spec
                .transition(raw[cur].state, i)
                .ok_or_else(|| Error::TestUndefinedOnSpec(spec.render(&test[..=n].to_vec().into())))?;
            if raw.len() >= budget {
                return Err(Error::NodeBudgetExceeded(budget));
            }
            raw.push(Raw {
                children: BTreeMap::new(),
                output: Some(o),
                state: t,
            });
            let id = raw.len() - 1;
            raw[cur].children.insert(i, id);
            cur = id;
        }
    }

    // renumber in preorder
    let mut nodes = Vec::with_capacity(raw.len());
    let mut spec_state = Vec::with_capacity(raw.len());
    let mut stack: Vec<(usize, Option<NodeId>, Option<Input>)> = vec![(0, None, None)];
    while let Some((r, parent, input)) = stack.pop() {
        let id = nodes.len();
        let depth = parent.map_or(0, |p: NodeId| nodes_depth(&nodes, p) + 1);
        nodes.push(TreeNode {
            parent,
            input,
            output: raw[r].output,
            depth,
            children: Vec::with_capacity(raw[r].children.len()),
        });
        spec_state.push(Some(raw[r].state));
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        for (&i, &c) in raw[r].children.iter().rev() {
            stack.push((c, Some(id), Some(i)));
        }
    }
    Ok(ObservationTree {
        inputs: spec.inputs().clone(),
        outputs: spec.outputs().clone(),
        nodes,
        spec_state,
    })
}

fn nodes_depth(nodes: &[TreeNode], p: NodeId) -> usize {
    nodes[p].depth
}

/// Whether `node ↦ δ(q0, access(node))` is a functional simulation from
/// `tree` into `machine`: every edge output along every path is reproduced.
pub fn check_functional_simulation(tree: &ObservationTree, machine: &MealyMachine) -> bool {
    if tree.inputs() != machine.inputs() {
        return false;
    }
    let bridge = output_bridge(tree.outputs(), machine.outputs());
    let mut image = vec![0; tree.len()];
    image[0] = machine.initial();
    // preorder: parents first
    for q in tree.nodes().skip(1) {
        let p = tree.parent(q).unwrap();
        match machine.transition(image[p], tree.input(q).unwrap()) {
            Some((t, o)) if bridge[o.index()] == tree.output(q).unwrap().0 as u32 => image[q] = t,
            _ => return false,
        }
    }
    true
}
